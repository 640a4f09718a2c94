#include "osid/dataset_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "json_io.hpp"

namespace osid {

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

}  // namespace

Dataset parse_feature_table(const std::string& text) {
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
    if (lines.empty()) throw ParseError("line 1: empty feature table");

    const auto header = split_csv_line(lines[0]);
    if (header.size() < 3 || header[0] != "identity" || header[1] != "image") {
        throw ParseError("line 1: expected header 'identity,image,f0,...'");
    }
    const std::size_t dim = header.size() - 2;
    for (std::size_t i = 0; i < dim; ++i) {
        if (header[i + 2] != "f" + std::to_string(i)) {
            throw ParseError("line 1: expected feature column 'f" + std::to_string(i) +
                             "', got '" + header[i + 2] + "'");
        }
    }

    Dataset d;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::size_t line_number = i + 1;
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != dim + 2) {
            throw ParseError("line " + std::to_string(line_number) + ": expected " +
                             std::to_string(dim + 2) + " fields, got " +
                             std::to_string(fields.size()));
        }

        LabeledFeature rec;
        rec.identity = fields[0];
        if (rec.identity.empty()) {
            throw ParseError("line " + std::to_string(line_number) +
                             ": empty identity");
        }
        {
            const auto& f = fields[1];
            const auto [ptr, ec] =
                std::from_chars(f.data(), f.data() + f.size(), rec.image_index);
            if (ec != std::errc() || ptr != f.data() + f.size()) {
                throw ParseError("line " + std::to_string(line_number) +
                                 ": image index '" + f + "' is not an integer");
            }
        }
        rec.feature.resize(dim);
        for (std::size_t c = 0; c < dim; ++c) {
            const auto& f = fields[c + 2];
            const auto [ptr, ec] =
                std::from_chars(f.data(), f.data() + f.size(), rec.feature[c]);
            if (ec != std::errc() || ptr != f.data() + f.size()) {
                throw ParseError("line " + std::to_string(line_number) +
                                 ": cannot parse feature value '" + f + "'");
            }
        }
        d.records.push_back(std::move(rec));
    }
    return d;
}

Dataset read_feature_table(const std::string& path) {
    Dataset d = parse_feature_table(read_text_file(path));
    const auto report = validate_dataset(d);
    if (!report.empty()) {
        throw DataError("invalid feature table '" + path + "': " +
                        to_string(report.front().kind) + " (" +
                        report.front().detail + ")" +
                        (report.size() > 1
                             ? ", and " + std::to_string(report.size() - 1) + " more"
                             : ""));
    }
    return d;
}

std::string write_feature_table(const Dataset& d) {
    if (d.records.empty()) throw InvalidInputError("cannot write an empty dataset");
    const std::size_t dim = d.dimension();

    std::string out = "identity,image";
    for (std::size_t i = 0; i < dim; ++i) out += ",f" + std::to_string(i);
    out += '\n';

    for (const auto& rec : d.records) {
        if (rec.identity.find(',') != std::string::npos ||
            rec.identity.find('\n') != std::string::npos) {
            throw InvalidInputError("identity '" + rec.identity +
                                    "' contains a comma or newline");
        }
        if (rec.feature.size() != dim) {
            throw InvalidInputError("record (" + rec.identity + ", " +
                                    std::to_string(rec.image_index) +
                                    ") has a mismatched dimension");
        }
        out += rec.identity;
        out += ',';
        out += std::to_string(rec.image_index);
        for (double v : rec.feature) {
            out += ',';
            out += detail::format_double(v);
        }
        out += '\n';
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw DataError("failed while reading '" + path + "'");
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw DataError("failed while writing '" + path + "'");
}

}  // namespace osid
