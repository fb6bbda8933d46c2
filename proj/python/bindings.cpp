#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "magicsq/census.hpp"
#include "magicsq/complexity.hpp"
#include "magicsq/ehrhart.hpp"
#include "magicsq/linalg.hpp"
#include "magicsq/local_factors.hpp"
#include "magicsq/polytope.hpp"
#include "magicsq/singular_series.hpp"

namespace py = pybind11;
using namespace magicsq;

namespace {

py::object json_to_py(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

py::int_ int_to_py(const Int& v) {
    return py::module_::import("builtins").attr("int")(v.get_str());
}

IntMatrix matrix_from_rows(const std::vector<std::vector<long long>>& rows) {
    if (rows.empty()) return IntMatrix(0, 0);
    IntMatrix m((int)rows.size(), (int)rows[0].size());
    for (size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size())
            throw ValidationError("matrix rows must have equal length");
        for (size_t c = 0; c < rows[r].size(); ++c)
            m.at((int)r, (int)c) = static_cast<long>(rows[r][c]);
    }
    return m;
}

std::vector<std::vector<long long>> matrix_to_rows(const IntMatrix& m) {
    std::vector<std::vector<long long>> rows(size_t(m.rows),
                                             std::vector<long long>(size_t(m.cols)));
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c) rows[size_t(r)][size_t(c)] = m.at(r, c).get_si();
    return rows;
}

}  // namespace

PYBIND11_MODULE(magicsq, m) {
    m.doc() = "Exact pipeline for counting magic squares of primes";

    py::register_exception<ValidationError>(m, "ValidationError");
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded");

    m.def("build_system", [](int n) { return json_to_py(build_system(n).to_json()); },
          py::arg("n"), "Z-basis of linear forms for n x n magic squares, as a dict");

    m.def("verify_z_basis", [](int n) {
        std::string why;
        bool ok = verify_z_basis(build_system(n), &why);
        return py::make_tuple(ok, why);
    }, py::arg("n"));

    m.def("complete_skeleton", [](int n, const std::vector<long long>& vals) {
        std::vector<Int> v;
        for (long long x : vals) v.push_back(Int(static_cast<long>(x)));
        auto grid = complete_skeleton(n, v);
        std::vector<std::vector<long long>> out;
        for (const auto& row : grid) {
            std::vector<long long> r;
            for (const auto& x : row) r.push_back(x.get_si());
            out.push_back(std::move(r));
        }
        return out;
    }, py::arg("n"), py::arg("values"));

    m.def("count_points", [](int n, long long N, int jobs) {
        return int_to_py(count_points(build_system(n), N, jobs));
    }, py::arg("n"), py::arg("N"), py::arg("jobs") = 1,
          "Lattice points of the dilation-N coefficient polytope");

    m.def("interior_count", [](int n, long long N, int jobs) {
        return int_to_py(interior_count(build_system(n), N, jobs));
    }, py::arg("n"), py::arg("N"), py::arg("jobs") = 1);

    m.def("quasipolynomial", [](int n, long long period, int jobs) {
        FormSystem sys = build_system(n);
        if (period <= 0) period = (long long)enumerate_vertices(sys).denominator_lcm.get_si();
        return json_to_py(interpolate_quasipolynomial(sys, period, nullptr, jobs).to_json());
    }, py::arg("n"), py::arg("period") = 0, py::arg("jobs") = 1);

    m.def("vertices", [](int n) {
        return json_to_py(enumerate_vertices(build_system(n)).to_json());
    }, py::arg("n"));

    m.def("system_complexity", [](int n) {
        return json_to_py(system_complexity(build_system(n)).to_json());
    }, py::arg("n"));

    m.def("rank_spectrum", [](int n) {
        return json_to_py(rank_spectrum(build_system(n)).to_json());
    }, py::arg("n"));

    m.def("stable_polynomial", [](int n) {
        return json_to_py(stable_polynomial(build_system(n)).to_json());
    }, py::arg("n"));

    m.def("local_factor", [](int n, unsigned long long p) {
        FormSystem sys = build_system(n);
        LocalFactor lf = local_factor(sys, p);
        py::dict d;
        d["p"] = lf.p;
        d["count"] = int_to_py(lf.count);
        d["beta"] = rat_to_string(lf.beta);
        d["beta_decimal"] = lf.beta.get_d();
        return d;
    }, py::arg("n"), py::arg("p"));

    m.def("singular_constant", [](int n, unsigned long long pmax, int digits, int jobs) {
        FormSystem sys = build_system(n);
        long long period = (long long)enumerate_vertices(sys).denominator_lcm.get_si();
        Quasipolynomial qp = interpolate_quasipolynomial(sys, period, nullptr, jobs);
        return json_to_py(singular_constant(sys, volume(qp), pmax, digits).to_json());
    }, py::arg("n"), py::arg("pmax") = 100000, py::arg("digits") = 12, py::arg("jobs") = 1);

    m.def("census", [](int n, long long N, long long budget, const std::string& resume) {
        CensusOptions opts;
        opts.budget = budget;
        opts.resume = resume;
        return json_to_py(census(n, N, opts).to_json());
    }, py::arg("n"), py::arg("N"), py::arg("budget") = -1, py::arg("resume") = "");

    m.def("hermite_normal_form", [](const std::vector<std::vector<long long>>& rows) {
        return matrix_to_rows(hermite_normal_form(matrix_from_rows(rows)));
    }, py::arg("rows"));

    m.def("rank", [](const std::vector<std::vector<long long>>& rows) {
        return rank_over_rationals(matrix_from_rows(rows));
    }, py::arg("rows"));

    m.def("rank_mod_p", [](const std::vector<std::vector<long long>>& rows,
                           unsigned long long p) {
        return rank_mod_p(matrix_from_rows(rows), p);
    }, py::arg("rows"), py::arg("p"));

    m.def("interpolate_poly",
          [](const std::vector<std::pair<long long, std::string>>& pts, int k) {
              std::vector<std::pair<long long, Rational>> points;
              for (const auto& [x, y] : pts) points.push_back({x, parse_rational(y)});
              std::vector<std::string> out;
              for (const auto& c : interpolate_poly(points, k)) out.push_back(rat_to_string(c));
              return out;
          }, py::arg("points"), py::arg("k"),
          "Exact polynomial interpolation; rationals passed as strings");
}
