#include "hyerslab/json_out.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace hyerslab {

std::string format_double(double d) {
    if (!std::isfinite(d)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

namespace {

void dump_rec(const Json& j, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<size_t>(indent) * depth, ' ');
    const std::string pad_in(static_cast<size_t>(indent) * (depth + 1), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            size_t c = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++c) {
                out += pad_in;
                out += Json(it.key()).dump();  // escaped key
                out += ": ";
                dump_rec(it.value(), out, indent, depth + 1);
                if (c + 1 < j.size()) out += ",";
                out += "\n";
            }
            out += pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // short numeric arrays stay on one line
            bool flat = true;
            for (const auto& v : j)
                if (v.is_structured()) flat = false;
            if (flat && j.size() <= 8) {
                out += "[";
                for (size_t i = 0; i < j.size(); ++i) {
                    dump_rec(j[i], out, indent, depth);
                    if (i + 1 < j.size()) out += ", ";
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (size_t i = 0; i < j.size(); ++i) {
                out += pad_in;
                dump_rec(j[i], out, indent, depth + 1);
                if (i + 1 < j.size()) out += ",";
                out += "\n";
            }
            out += pad + "]";
            return;
        }
        case Json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();  // ints, bools, strings, null
            return;
    }
}

}  // namespace

std::string dump_deterministic(const Json& j, int indent) {
    std::string out;
    dump_rec(j, out, indent, 0);
    out += "\n";
    return out;
}

Json complex_to_json(cx z) { return Json::array({z.real(), z.imag()}); }

Json cvector_to_json(const CVector& v) {
    Json a = Json::array();
    for (const cx& z : v) a.push_back(complex_to_json(z));
    return a;
}

Json matrix_to_json(const CMatrix& m) {
    Json entries = Json::array();
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) entries.push_back(complex_to_json(m(r, c)));
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

CMatrix matrix_from_json(const Json& j) {
    int rows = j.at("rows").get<int>();
    int cols = j.at("cols").get<int>();
    CMatrix m(rows, cols);
    const Json& e = j.at("entries");
    if (static_cast<int>(e.size()) != rows * cols)
        throw DimensionMismatch("matrix entries count mismatch");
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const Json& z = e[static_cast<size_t>(r) * cols + c];
            m(r, c) = cx(z[0].get<double>(), z[1].get<double>());
        }
    return m;
}

Json violation_report_to_json(const ViolationReport& rep) {
    Json items = Json::array();
    for (const Violation& v : rep.items)
        items.push_back(Json{{"check", v.check}, {"residual", v.residual}, {"where", v.where}});
    return Json{{"valid", rep.ok()}, {"violations", items}};
}

Json solution_space_to_json(const SolutionSpace& space) {
    Json basis = Json::array();
    if (!space.pairs.empty()) {
        for (const auto& [d, delta] : space.pairs)
            basis.push_back(Json{{"d", matrix_to_json(d.matrix())},
                                 {"delta", matrix_to_json(delta.matrix())}});
    } else {
        for (const LinearMap& m : space.basis)
            basis.push_back(Json{{"matrix", matrix_to_json(m.matrix())}});
    }
    Json spectrum = Json::array();
    for (double s : space.spectrum) spectrum.push_back(s);
    Json j{{"kind", to_string(space.kind)}, {"dim_a", space.dim_a},
           {"dim_x", space.dim_x},         {"dimension", space.dimension()},
           {"residual", space.residual},   {"spectrum", spectrum},
           {"basis", basis}};
    if (!std::isnan(space.d_minus_delta_rm_residual))
        j["d_minus_delta_rm_residual"] = space.d_minus_delta_rm_residual;
    return j;
}

Json linearity_report_to_json(const LinearityReport& rep) {
    return Json{{"max_additive_defect", rep.max_additive_defect},
                {"max_homogeneity_defect", rep.max_homogeneity_defect},
                {"alpha_residual", rep.alpha_residual},
                {"linear", rep.linear},
                {"tol", rep.tol},
                {"samples", rep.samples}};
}

void write_history_csv(std::ostream& os, const HyersResult& res) {
    os << "basis_index,n,distance,scaled_bound\n";
    for (size_t i = 0; i < res.history.size(); ++i) {
        const auto& dist = res.history[i];
        for (size_t n = 0; n < dist.size(); ++n) {
            os << i << "," << (n + 1) << "," << format_double(dist[n]) << ",";
            if (i < res.bound_history.size() && n < res.bound_history[i].size())
                os << format_double(res.bound_history[i][n]);
            os << "\n";
        }
    }
}

void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
        f << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

}  // namespace hyerslab
