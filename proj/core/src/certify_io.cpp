#include <fstream>
#include <sstream>

#include "json.hpp"
#include "lurecert/certify.hpp"

namespace lure::certify {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& M) {
    json j;
    j["rows"] = M.rows();
    j["cols"] = M.cols();
    json data = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index k = 0; k < M.cols(); ++k) data.push_back(M(i, k));
    j["data"] = std::move(data);
    return j;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
    const auto& data = j.at("data");
    if (static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw std::runtime_error("certificate matrix data length mismatch");
    Eigen::MatrixXd M(rows, cols);
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index k = 0; k < cols; ++k) M(i, k) = data.at(idx++).get<double>();
    return M;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

Eigen::VectorXd vector_from_json(const json& a) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = a.at(i).get<double>();
    return v;
}

}  // namespace

std::string certificate_to_json(const Certificate& cert) {
    json j;
    j["method"] = to_string(cert.method);
    j["alpha"] = cert.alpha;
    j["ell"] = cert.ell;
    j["plant_fingerprint"] = cert.plant_fingerprint;
    j["stacking"] = cert.stacking;
    j["P"] = matrix_to_json(cert.P);
    if (cert.method == Method::Lifting) {
        j["p"] = vector_to_json(cert.p);
        j["M1"] = matrix_to_json(cert.M1.M);
        j["m1"] = vector_to_json(cert.M1.m);
        j["M2"] = matrix_to_json(cert.M2.M);
        j["m2"] = vector_to_json(cert.M2.m);
    } else {
        j["n_b"] = cert.n_b;
        j["n_f"] = cert.n_f;
        j["taps"] = vector_to_json(cert.taps);
    }
    j["residuals"] = {{"worst_psd", cert.worst_psd_residual},
                      {"worst_linear", cert.worst_linear_residual}};
    return j.dump(2);
}

Certificate certificate_from_json(const std::string& text) {
    const json j = json::parse(text);
    Certificate cert;
    const std::string method = j.at("method").get<std::string>();
    if (method == "lifting")
        cert.method = Method::Lifting;
    else if (method == "zf")
        cert.method = Method::Zf;
    else
        throw std::runtime_error("unknown certificate method: " + method);
    cert.alpha = j.at("alpha").get<double>();
    cert.ell = j.at("ell").get<int>();
    cert.plant_fingerprint = j.at("plant_fingerprint").get<std::string>();
    cert.stacking = j.value("stacking", std::string("oldest-first"));
    if (cert.stacking != "oldest-first")
        throw std::runtime_error("unsupported stacking convention: " + cert.stacking);
    cert.P = matrix_from_json(j.at("P"));
    if (cert.method == Method::Lifting) {
        cert.p = vector_from_json(j.at("p"));
        cert.M1 = {matrix_from_json(j.at("M1")), vector_from_json(j.at("m1"))};
        cert.M2 = {matrix_from_json(j.at("M2")), vector_from_json(j.at("m2"))};
    } else {
        cert.n_b = j.at("n_b").get<int>();
        cert.n_f = j.at("n_f").get<int>();
        cert.taps = vector_from_json(j.at("taps"));
    }
    if (j.contains("residuals")) {
        cert.worst_psd_residual = j["residuals"].value("worst_psd", 0.0);
        cert.worst_linear_residual = j["residuals"].value("worst_linear", 0.0);
    }
    return cert;
}

void save_certificate(const Certificate& cert, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write certificate file: " + path);
    out << certificate_to_json(cert) << "\n";
}

Certificate load_certificate(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open certificate file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return certificate_from_json(buf.str());
}

}  // namespace lure::certify
