#include "elaa/detectors.hpp"

#include <algorithm>
#include <cctype>

namespace elaa {

Method parse_method(std::string_view name) {
    std::string up(name);
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    up.erase(std::remove(up.begin(), up.end(), '-'), up.end());
    for (auto m : {Method::RI, Method::JI, Method::GS, Method::SSOR, Method::LBFGS})
        if (up == to_string(m)) return m;
    throw ConfigError("unknown detector method '" + std::string(name) + "'");
}

}  // namespace elaa
