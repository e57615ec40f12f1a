#include "spinpow/gate_io.hpp"

#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace spinpow {

using nlohmann::json;

void write_gate_json(const std::string& path, const UnitaryGate& gate) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < gate.matrix.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < gate.matrix.cols(); ++c)
            row.push_back({gate.matrix(r, c).real(), gate.matrix(r, c).imag()});
        rows.push_back(std::move(row));
    }
    const json doc = {{"j", gate.j.str()}, {"matrix", std::move(rows)}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << doc.dump(1) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path);
}

UnitaryGate read_gate_json(const std::string& path, double unitarity_tol) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open gate file " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("gate file " + path + ": " + e.what());
    }
    if (!doc.contains("j")) throw std::invalid_argument("gate file " + path + ": missing \"j\"");
    HalfInt j{0};
    if (doc["j"].is_string())
        j = HalfInt::parse(doc["j"].get<std::string>());
    else if (doc["j"].is_number())
        j = HalfInt::parse(std::to_string(doc["j"].get<double>()));
    else
        throw std::invalid_argument("gate file " + path + ": \"j\" must be a string or number");

    const int d = dim(j);
    if (!doc.contains("matrix") || !doc["matrix"].is_array() ||
        static_cast<int>(doc["matrix"].size()) != d)
        throw std::invalid_argument("gate file " + path + ": \"matrix\" must have " +
                                    std::to_string(d) + " rows for j=" + j.str());

    Matrix m(d, d);
    for (int r = 0; r < d; ++r) {
        const json& row = doc["matrix"][static_cast<size_t>(r)];
        if (!row.is_array() || static_cast<int>(row.size()) != d)
            throw std::invalid_argument("gate file " + path + ": row " + std::to_string(r) +
                                        " must have " + std::to_string(d) + " entries");
        for (int c = 0; c < d; ++c) {
            const json& entry = row[static_cast<size_t>(c)];
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
                !entry[1].is_number())
                throw std::invalid_argument("gate file " + path + ": entry at row " +
                                            std::to_string(r) + ", col " + std::to_string(c) +
                                            " must be [re, im]");
            m(r, c) = Complex(entry[0].get<double>(), entry[1].get<double>());
        }
    }

    UnitaryGate gate{j, std::move(m)};
    const double defect = gate.unitarity_defect();
    if (defect > unitarity_tol) {
        const Matrix should = gate.matrix * gate.matrix.adjoint();
        Eigen::Index worst_r = 0, worst_c = 0;
        (should - Matrix::Identity(d, d)).cwiseAbs().maxCoeff(&worst_r, &worst_c);
        throw std::invalid_argument(
            "gate file " + path + ": matrix is not unitary (defect " + std::to_string(defect) +
            " at row " + std::to_string(worst_r) + ", col " + std::to_string(worst_c) + ")");
    }
    return gate;
}

}  // namespace spinpow
