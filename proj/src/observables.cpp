#include "cea/observables.hpp"

namespace cea {

std::vector<std::string> default_labels(std::size_t k) {
    std::vector<std::string> out;
    out.reserve(k);
    for (std::size_t i = 1; i <= k; ++i) out.push_back(std::to_string(i));
    return out;
}

}  // namespace cea
