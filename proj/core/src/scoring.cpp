#include "osid/scoring.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "json_io.hpp"
#include "parallel.hpp"

namespace osid {

std::string to_string(Method m) {
    switch (m) {
        case Method::Cosine: return "cos";
        case Method::Lda: return "lda";
        case Method::Evm: return "evm";
    }
    return "?";
}

Method method_from_string(const std::string& s) {
    if (s == "cos") return Method::Cosine;
    if (s == "lda") return Method::Lda;
    if (s == "evm") return Method::Evm;
    throw InvalidInputError("unknown method '" + s + "' (expected cos, lda or evm)");
}

double score_cosine_max(const GalleryTemplate& g, const FeatureVector& probe) {
    if (g.features.empty()) {
        throw InvalidInputError("template '" + g.identity + "' has no enrolled features");
    }
    double best = cosine_similarity(g.features.front(), probe);
    for (std::size_t i = 1; i < g.features.size(); ++i) {
        best = std::max(best, cosine_similarity(g.features[i], probe));
    }
    return best;
}

double score_cosine_avg(const GalleryTemplate& g, const FeatureVector& probe) {
    return cosine_similarity(g.mean, probe);
}

double score_lda(const SubspaceModel& m, const GalleryTemplate& g,
                 const FeatureVector& probe, Fusion fusion) {
    const FeatureVector projected_probe = project(m, probe);
    if (fusion == Fusion::Avg) {
        return cosine_similarity(project(m, g.mean), projected_probe);
    }
    if (g.features.empty()) {
        throw InvalidInputError("template '" + g.identity + "' has no enrolled features");
    }
    double best = cosine_similarity(project(m, g.features.front()), projected_probe);
    for (std::size_t i = 1; i < g.features.size(); ++i) {
        best = std::max(best,
                        cosine_similarity(project(m, g.features[i]), projected_probe));
    }
    return best;
}

namespace {

std::string key_of(const LabeledFeature& probe) {
    return "probe (" + probe.identity + ", " + std::to_string(probe.image_index) + ")";
}

// Cached side of a cosine comparison: the vector and its norm, so batch
// scoring reuses norms while producing bit-identical values to the
// single-pair calls (same dot, same norms, same clamp).
struct NormedVector {
    const FeatureVector* v = nullptr;
    FeatureVector owned;  // used when the cached vector is computed (projections)
    double norm = 0.0;

    const FeatureVector& get() const { return v ? *v : owned; }
};

double cosine_cached(const NormedVector& a, const NormedVector& b) {
    return std::clamp(dot_product(a.get(), b.get()) / (a.norm * b.norm), -1.0, 1.0);
}

NormedVector cache_ref(const FeatureVector& v, const std::string& what) {
    NormedVector c;
    c.v = &v;
    c.norm = l2_norm(v);
    if (c.norm == 0.0) {
        throw InvalidInputError(what + ": cosine undefined for a zero-norm vector");
    }
    return c;
}

NormedVector cache_owned(FeatureVector v, const std::string& what) {
    NormedVector c;
    c.owned = std::move(v);
    c.norm = l2_norm(c.owned);
    if (c.norm == 0.0) {
        throw InvalidInputError(what + ": cosine undefined for a zero-norm vector");
    }
    return c;
}

}  // namespace

ScoreMatrix score_all(const ScoringMethod& method,
                      const std::vector<GalleryTemplate>& gallery,
                      const std::vector<LabeledFeature>& probes) {
    if (probes.empty()) throw InvalidInputError("no probes to score");
    if (gallery.empty()) throw InvalidInputError("empty gallery");

    ScoreMatrix matrix;
    matrix.gallery_subjects.reserve(gallery.size());
    for (const auto& g : gallery) matrix.gallery_subjects.push_back(g.identity);
    matrix.probe_keys.reserve(probes.size());
    for (const auto& p : probes) matrix.probe_keys.push_back({p.identity, p.image_index});
    matrix.scores.assign(probes.size() * gallery.size(), 0.0);

    const std::size_t cols = gallery.size();

    switch (method.method) {
        case Method::Cosine: {
            // Per-subject caches: enrolled features (Max) or the mean (Avg).
            std::vector<std::vector<NormedVector>> cached(cols);
            for (std::size_t c = 0; c < cols; ++c) {
                const auto& g = gallery[c];
                try {
                    if (method.fusion == Fusion::Max) {
                        if (g.features.empty()) {
                            throw InvalidInputError("template has no enrolled features");
                        }
                        for (const auto& f : g.features) {
                            cached[c].push_back(cache_ref(f, "enrolled feature"));
                        }
                    } else {
                        cached[c].push_back(cache_ref(g.mean, "template mean"));
                    }
                } catch (const Error& e) {
                    rethrow_annotated(e, "subject '" + g.identity + "'");
                }
            }
            detail::parallel_for(probes.size(), [&](std::size_t r) {
                NormedVector probe;
                try {
                    probe = cache_ref(probes[r].feature, "probe feature");
                } catch (const Error& e) {
                    rethrow_annotated(e, key_of(probes[r]));
                }
                for (std::size_t c = 0; c < cols; ++c) {
                    if (probe.get().size() != cached[c].front().get().size()) {
                        throw InvalidInputError(
                            key_of(probes[r]) + ", subject '" + gallery[c].identity +
                            "': dimension mismatch");
                    }
                    double best = cosine_cached(cached[c].front(), probe);
                    for (std::size_t i = 1; i < cached[c].size(); ++i) {
                        best = std::max(best, cosine_cached(cached[c][i], probe));
                    }
                    matrix.at(r, c) = best;
                }
            });
            break;
        }
        case Method::Lda: {
            if (method.subspace == nullptr) {
                throw InvalidInputError("LDA scoring requires a subspace model");
            }
            const SubspaceModel& m = *method.subspace;
            std::vector<std::vector<NormedVector>> cached(cols);
            for (std::size_t c = 0; c < cols; ++c) {
                const auto& g = gallery[c];
                try {
                    if (method.fusion == Fusion::Max) {
                        if (g.features.empty()) {
                            throw InvalidInputError("template has no enrolled features");
                        }
                        for (const auto& f : g.features) {
                            cached[c].push_back(
                                cache_owned(project(m, f), "projected feature"));
                        }
                    } else {
                        cached[c].push_back(
                            cache_owned(project(m, g.mean), "projected template mean"));
                    }
                } catch (const Error& e) {
                    rethrow_annotated(e, "subject '" + g.identity + "'");
                }
            }
            detail::parallel_for(probes.size(), [&](std::size_t r) {
                NormedVector probe;
                try {
                    probe = cache_owned(project(m, probes[r].feature), "projected probe");
                } catch (const Error& e) {
                    rethrow_annotated(e, key_of(probes[r]));
                }
                for (std::size_t c = 0; c < cols; ++c) {
                    double best = cosine_cached(cached[c].front(), probe);
                    for (std::size_t i = 1; i < cached[c].size(); ++i) {
                        best = std::max(best, cosine_cached(cached[c][i], probe));
                    }
                    matrix.at(r, c) = best;
                }
            });
            break;
        }
        case Method::Evm: {
            if (method.evm == nullptr) {
                throw InvalidInputError("EVM scoring requires a trained gallery model");
            }
            const EvmGalleryModel& model = *method.evm;
            if (method.fusion != model.config.fusion) {
                throw InvalidInputError("requested fusion does not match the "
                                        "model's trained fusion mode");
            }
            if (model.subjects.size() != gallery.size()) {
                throw InvalidInputError("EVM model and gallery disagree on subjects");
            }
            for (std::size_t c = 0; c < cols; ++c) {
                if (model.subjects[c].identity != gallery[c].identity) {
                    throw InvalidInputError("EVM model subject order does not match "
                                            "the gallery");
                }
            }
            detail::parallel_for(probes.size(), [&](std::size_t r) {
                try {
                    const std::vector<double> row =
                        model.config.fusion == Fusion::Max
                            ? score_max(model, probes[r].feature)
                            : score_avg(model, probes[r].feature);
                    std::copy(row.begin(), row.end(),
                              matrix.scores.begin() + static_cast<std::ptrdiff_t>(r * cols));
                } catch (const Error& e) {
                    rethrow_annotated(e, key_of(probes[r]));
                }
            });
            break;
        }
    }
    return matrix;
}

std::string score_matrix_to_csv(const ScoreMatrix& m) {
    std::string out = "identity,image";
    for (const auto& subject : m.gallery_subjects) {
        if (subject.find(',') != std::string::npos ||
            subject.find('\n') != std::string::npos) {
            throw InvalidInputError("subject '" + subject +
                                    "' contains a comma or newline");
        }
        out += ',';
        out += subject;
    }
    out += '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto& key = m.probe_keys[r];
        if (key.identity.find(',') != std::string::npos ||
            key.identity.find('\n') != std::string::npos) {
            throw InvalidInputError("identity '" + key.identity +
                                    "' contains a comma or newline");
        }
        out += key.identity;
        out += ',';
        out += std::to_string(key.image_index);
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out += ',';
            out += detail::format_double(m.at(r, c));
        }
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

double parse_double_field(const std::string& field, std::size_t line_number) {
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw ParseError("line " + std::to_string(line_number) +
                         ": cannot parse number '" + field + "'");
    }
    return value;
}

int parse_image_field(const std::string& field, std::size_t line_number) {
    int value = 0;
    const auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size() || value < 1) {
        throw ParseError("line " + std::to_string(line_number) +
                         ": image index must be a positive integer, got '" + field +
                         "'");
    }
    return value;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

}  // namespace

ScoreMatrix score_matrix_from_csv(const std::string& text) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw ParseError("line 1: empty score matrix file");

    const auto header = split_csv_line(lines[0]);
    if (header.size() < 3 || header[0] != "identity" || header[1] != "image") {
        throw ParseError("line 1: expected header 'identity,image,<subjects...>'");
    }
    ScoreMatrix m;
    m.gallery_subjects.assign(header.begin() + 2, header.end());

    const std::size_t cols = m.gallery_subjects.size();
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != cols + 2) {
            throw ParseError("line " + std::to_string(i + 1) + ": expected " +
                             std::to_string(cols + 2) + " fields, got " +
                             std::to_string(fields.size()));
        }
        m.probe_keys.push_back({fields[0], parse_image_field(fields[1], i + 1)});
        for (std::size_t c = 0; c < cols; ++c) {
            m.scores.push_back(parse_double_field(fields[c + 2], i + 1));
        }
    }
    if (m.probe_keys.empty()) throw ParseError("score matrix has no rows");
    return m;
}

}  // namespace osid
