#include "lurecert/bench_cases.hpp"

#include <openssl/evp.h>

#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lure::bench {

const std::vector<BenchmarkCase>& table() {
    static const std::vector<BenchmarkCase> cases = [] {
        std::vector<BenchmarkCase> t;
        t.push_back({1, lti::tf_from_coeffs({0.1, 0.0}, {1, -1.8, 0.81}),
                     12.9960, 1, 0, 1, 1e-3});
        t.push_back({2,
                     lti::tf_from_coeffs({1, -1.95, 0.9, 0.05},
                                         {1, -2.8, 3.5, -2.412, 0.7209}),
                     0.8027, 1, 4, 4, 1e-3});
        t.push_back({3,
                     lti::tf_from_coeffs({-1, 1.95, -0.9, -0.05},
                                         {1, -2.8, 3.5, -2.412, 0.7209}),
                     0.3054, 0, 1, 1, 1e-3});
        t.push_back({4,
                     lti::tf_from_coeffs({1, -1.5, 0.5, -0.5, 0.5},
                                         {4.4, -8.957, 9.893, -5.671, 2.207, -0.5}),
                     3.8240, 0, 4, 4, 1e-3});
        t.push_back({5,
                     lti::tf_from_coeffs({-0.5, 0.1}, {1, -0.9, 0.79, 0.089}),
                     2.4475, 0, 1, 1, 1e-3});
        t.push_back({6, lti::tf_from_coeffs({2, 0.92}, {1, -0.5, 0}),
                     0.9114, 1, 2, 2, 1e-3});
        t.push_back({7,
                     lti::tf_from_coeffs({1.341, -1.221, 0.6285, -0.5618, 0.1993},
                                         {1, -0.935, 0.7697, -1.118, 0.6917, -0.1352}),
                     0.4347, 3, 3, 3, 5e-3});
        return t;
    }();
    return cases;
}

const BenchmarkCase& example(int id) {
    for (const auto& c : table())
        if (c.id == id) return c;
    throw std::out_of_range("no benchmark example with id " + std::to_string(id));
}

std::string table_checksum() {
    std::string blob;
    for (const auto& c : table()) {
        blob += std::to_string(c.id) + ":";
        for (double v : c.g.num) blob += nlohmann::json(v).dump() + ",";
        blob += ";";
        for (double v : c.g.den) blob += nlohmann::json(v).dump() + ",";
        blob += "|";
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(blob.data(), blob.size(), digest, &len, EVP_sha256(), nullptr);
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i)
        out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return out.str();
}

}  // namespace lure::bench
