#include "osid/subspace.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json_io.hpp"

namespace osid {

namespace {

Eigen::MatrixXd to_matrix(const std::vector<FeatureVector>& rows) {
    if (rows.empty()) throw InvalidInputError("empty sample");
    const auto dim = rows.front().size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != dim) {
            throw InvalidInputError("sample vectors have mixed dimensions");
        }
        m.row(static_cast<Eigen::Index>(i)) =
            Eigen::Map<const Eigen::VectorXd>(rows[i].data(),
                                              static_cast<Eigen::Index>(dim));
    }
    return m;
}

// Flips each row so its largest-magnitude entry is positive; makes the
// basis deterministic across eigen-solver sign choices.
void fix_row_signs(Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Eigen::Index argmax = 0;
        m.row(r).cwiseAbs().maxCoeff(&argmax);
        if (m(r, argmax) < 0.0) m.row(r) = -m.row(r);
    }
}

}  // namespace

PcaModel fit_pca(const std::vector<FeatureVector>& training, double retention) {
    if (!(retention > 0.0 && retention <= 1.0)) {
        throw InvalidInputError("PCA retention must lie in (0, 1]");
    }
    if (training.size() < 2) {
        throw InvalidInputError("PCA needs at least 2 training samples");
    }

    Eigen::MatrixXd x = to_matrix(training);
    const Eigen::Index n = x.rows();

    PcaModel model;
    model.retention = retention;
    model.mean = x.colwise().mean();
    x.rowwise() -= model.mean.transpose();

    Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinV);
    const Eigen::VectorXd singular = svd.singularValues();
    model.explained_variance =
        singular.array().square() / static_cast<double>(n - 1);
    model.components = svd.matrixV().transpose();
    fix_row_signs(model.components);

    const double total = model.explained_variance.sum();
    if (!(total > 0.0)) {
        throw DataError("degenerate sample: zero total variance, PCA undefined");
    }
    const double target = retention * total * (1.0 - 1e-12);
    double cumulative = 0.0;
    model.retained = static_cast<int>(model.explained_variance.size());
    for (Eigen::Index i = 0; i < model.explained_variance.size(); ++i) {
        cumulative += model.explained_variance(i);
        if (cumulative >= target) {
            model.retained = static_cast<int>(i) + 1;
            break;
        }
    }
    return model;
}

Eigen::VectorXd project_pca(const PcaModel& m, const FeatureVector& x) {
    if (static_cast<Eigen::Index>(x.size()) != m.mean.size()) {
        throw InvalidInputError("PCA projection: dimension mismatch");
    }
    const Eigen::Map<const Eigen::VectorXd> v(x.data(),
                                              static_cast<Eigen::Index>(x.size()));
    return m.components.topRows(m.retained) * (v - m.mean);
}

FeatureVector reconstruct_pca(const PcaModel& m, const Eigen::VectorXd& y) {
    if (y.size() != m.retained) {
        throw InvalidInputError("PCA reconstruction: dimension mismatch");
    }
    const Eigen::VectorXd x = m.components.topRows(m.retained).transpose() * y + m.mean;
    return FeatureVector(x.data(), x.data() + x.size());
}

LdaModel fit_lda(const std::vector<Eigen::VectorXd>& samples,
                 const std::vector<int>& labels) {
    if (samples.size() != labels.size()) {
        throw InvalidInputError("LDA: one label per sample required");
    }
    if (samples.empty()) throw InvalidInputError("LDA: empty training set");
    const Eigen::Index dim = samples.front().size();

    std::map<int, std::vector<const Eigen::VectorXd*>> classes;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].size() != dim) {
            throw InvalidInputError("LDA: samples have mixed dimensions");
        }
        classes[labels[i]].push_back(&samples[i]);
    }
    if (classes.size() < 2) {
        throw InvalidInputError("LDA needs at least 2 classes, got " +
                                std::to_string(classes.size()));
    }
    if (std::none_of(classes.begin(), classes.end(),
                     [](const auto& c) { return c.second.size() >= 2; })) {
        throw InvalidInputError("LDA: every class has a single sample, "
                                "within-class scatter is empty");
    }

    Eigen::VectorXd global_mean = Eigen::VectorXd::Zero(dim);
    for (const auto& s : samples) global_mean += s;
    global_mean /= static_cast<double>(samples.size());

    Eigen::MatrixXd within = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd between = Eigen::MatrixXd::Zero(dim, dim);
    for (const auto& [label, members] : classes) {
        Eigen::VectorXd class_mean = Eigen::VectorXd::Zero(dim);
        for (const auto* s : members) class_mean += *s;
        class_mean /= static_cast<double>(members.size());

        for (const auto* s : members) {
            const Eigen::VectorXd d = *s - class_mean;
            within.noalias() += d * d.transpose();
        }
        const Eigen::VectorXd d = class_mean - global_mean;
        between.noalias() += static_cast<double>(members.size()) * d * d.transpose();
    }

    const double trace = within.trace();
    if (!(trace > 0.0)) {
        throw NumericError("LDA: within-class scatter is singular (zero trace)");
    }
    within += 1e-6 * trace / static_cast<double>(dim) *
              Eigen::MatrixXd::Identity(dim, dim);

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(between, within);
    if (solver.info() != Eigen::Success) {
        throw NumericError("LDA: generalized eigenproblem failed to converge");
    }

    const int out_dim =
        std::min<int>(static_cast<int>(classes.size()) - 1, static_cast<int>(dim));
    LdaModel model;
    model.class_count = static_cast<int>(classes.size());
    model.projection.resize(dim, out_dim);
    model.eigenvalues.resize(out_dim);
    // Eigen returns ascending eigenvalues; take the top out_dim, descending.
    for (int k = 0; k < out_dim; ++k) {
        const Eigen::Index src = dim - 1 - k;
        model.projection.col(k) = solver.eigenvectors().col(src);
        model.eigenvalues(k) = solver.eigenvalues()(src);
    }
    Eigen::MatrixXd cols_as_rows = model.projection.transpose();
    fix_row_signs(cols_as_rows);
    model.projection = cols_as_rows.transpose();
    return model;
}

SubspaceModel combine(const PcaModel& pca, const LdaModel& lda) {
    if (lda.projection.rows() != pca.retained) {
        throw InvalidInputError("combine: LDA input dimension does not match "
                                "the retained PCA dimension");
    }
    SubspaceModel m;
    m.mean = pca.mean;
    m.w = pca.components.topRows(pca.retained).transpose() * lda.projection;
    m.retention = pca.retention;
    return m;
}

SubspaceModel fit_subspace(const std::vector<FeatureVector>& training,
                           const std::vector<int>& labels, double retention) {
    const PcaModel pca = fit_pca(training, retention);
    std::vector<Eigen::VectorXd> projected;
    projected.reserve(training.size());
    for (const auto& f : training) projected.push_back(project_pca(pca, f));
    return combine(pca, fit_lda(projected, labels));
}

FeatureVector project(const SubspaceModel& m, const FeatureVector& x) {
    if (static_cast<Eigen::Index>(x.size()) != m.w.rows()) {
        throw InvalidInputError("projection: expected dimension " +
                                std::to_string(m.w.rows()) + ", got " +
                                std::to_string(x.size()));
    }
    const Eigen::Map<const Eigen::VectorXd> v(x.data(),
                                              static_cast<Eigen::Index>(x.size()));
    const Eigen::VectorXd y = m.w.transpose() * (v - m.mean);
    return FeatureVector(y.data(), y.data() + y.size());
}

std::string subspace_to_json(const SubspaceModel& m) {
    detail::ordered_json j;
    j["input_dim"] = m.input_dim();
    j["output_dim"] = m.output_dim();
    j["retention"] = m.retention;
    auto mean = detail::ordered_json::array();
    for (Eigen::Index i = 0; i < m.mean.size(); ++i) mean.push_back(m.mean(i));
    j["mean"] = mean;
    auto w = detail::ordered_json::array();  // row-major
    for (Eigen::Index r = 0; r < m.w.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.w.cols(); ++c) w.push_back(m.w(r, c));
    }
    j["w"] = w;
    return detail::dump_json(j);
}

SubspaceModel subspace_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("subspace model: ") + e.what());
    }
    try {
        SubspaceModel m;
        const auto rows = j.at("input_dim").get<Eigen::Index>();
        const auto cols = j.at("output_dim").get<Eigen::Index>();
        m.retention = j.at("retention").get<double>();
        const auto mean = j.at("mean").get<std::vector<double>>();
        const auto w = j.at("w").get<std::vector<double>>();
        if (static_cast<Eigen::Index>(mean.size()) != rows ||
            static_cast<Eigen::Index>(w.size()) != rows * cols) {
            throw ParseError("subspace model: inconsistent dimensions");
        }
        m.mean = Eigen::Map<const Eigen::VectorXd>(mean.data(), rows);
        m.w = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                             Eigen::RowMajor>>(w.data(), rows, cols);
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("subspace model: ") + e.what());
    }
}

}  // namespace osid
