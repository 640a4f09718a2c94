#include "json_io.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace osid::detail {

std::string format_double(double value) {
    if (!std::isfinite(value)) {
        throw std::invalid_argument("cannot serialize a non-finite number");
    }
    char buf[40];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value,
                                         std::chars_format::general, 17);
    if (ec != std::errc()) {
        throw std::invalid_argument("number formatting failed");
    }
    return std::string(buf, ptr);
}

static void dump_into(const ordered_json& j, std::string& out) {
    switch (j.type()) {
        case nlohmann::detail::value_t::null:
            out += "null";
            break;
        case nlohmann::detail::value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            break;
        case nlohmann::detail::value_t::number_float:
            out += format_double(j.get<double>());
            break;
        case nlohmann::detail::value_t::number_integer:
        case nlohmann::detail::value_t::number_unsigned:
        case nlohmann::detail::value_t::string:
            out += j.dump();  // exact integers; strings with escaping
            break;
        case nlohmann::detail::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& item : j) {
                if (!first) out += ',';
                first = false;
                dump_into(item, out);
            }
            out += ']';
            break;
        }
        case nlohmann::detail::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += ordered_json(it.key()).dump();
                out += ':';
                dump_into(it.value(), out);
            }
            out += '}';
            break;
        }
        default:
            throw std::invalid_argument("unsupported JSON value type");
    }
}

std::string dump_json(const ordered_json& j) {
    std::string out;
    dump_into(j, out);
    return out;
}

}  // namespace osid::detail
