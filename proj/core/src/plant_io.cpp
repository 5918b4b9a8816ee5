#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "lurecert/lti.hpp"

namespace lure::lti {

namespace {

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i)
        out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return out.str();
}

// Shortest round-trip decimal via nlohmann's serializer.
std::string canonical_number(double v) { return nlohmann::json(v).dump(); }

std::string canonical_list(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += canonical_number(v[i]);
    }
    return s + "]";
}

std::string canonical_tf(const TransferFunction& tf) {
    return "tf:num=" + canonical_list(tf.num) + ";den=" + canonical_list(tf.den);
}

std::string canonical_ss(const StateSpace& ss) {
    std::string s = "ss:A=[";
    for (int i = 0; i < ss.n(); ++i) {
        if (i) s += ";";
        for (int j = 0; j < ss.n(); ++j) {
            if (j) s += ",";
            s += canonical_number(ss.A(i, j));
        }
    }
    s += "];B=[";
    for (int i = 0; i < ss.n(); ++i) {
        if (i) s += ",";
        s += canonical_number(ss.B[i]);
    }
    s += "];C=[";
    for (int i = 0; i < ss.n(); ++i) {
        if (i) s += ",";
        s += canonical_number(ss.C[i]);
    }
    s += "];D=" + canonical_number(ss.D);
    return s;
}

}  // namespace

Plant make_plant(const TransferFunction& tf) {
    Plant p;
    p.tf = tf;
    p.ss = tf_to_ss(tf);
    p.fingerprint = sha256_hex(canonical_tf(tf));
    return p;
}

Plant make_plant(const StateSpace& ss) {
    Plant p;
    p.ss = ss;
    p.fingerprint = sha256_hex(canonical_ss(ss));
    return p;
}

Plant parse_plant(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    if (j.contains("ss")) {
        const auto& js = j.at("ss");
        const auto& ja = js.at("A");
        const int n = static_cast<int>(ja.size());
        StateSpace ss;
        ss.A.resize(n, n);
        ss.B.resize(n);
        ss.C.resize(n);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(ja.at(i).size()) != n)
                throw DimensionMismatch("ss.A must be square");
            for (int k = 0; k < n; ++k) ss.A(i, k) = ja.at(i).at(k).get<double>();
        }
        const auto& jb = js.at("B");
        const auto& jc = js.at("C");
        if (static_cast<int>(jb.size()) != n || static_cast<int>(jc.size()) != n)
            throw DimensionMismatch("ss.B / ss.C length must match A");
        for (int i = 0; i < n; ++i) ss.B[i] = jb.at(i).get<double>();
        for (int i = 0; i < n; ++i) ss.C[i] = jc.at(i).get<double>();
        ss.D = js.value("D", 0.0);
        return make_plant(ss);
    }
    auto tf = tf_from_coeffs(j.at("num").get<std::vector<double>>(),
                             j.at("den").get<std::vector<double>>());
    return make_plant(tf);
}

Plant load_plant(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open plant file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_plant(buf.str());
}

}  // namespace lure::lti
