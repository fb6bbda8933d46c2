#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "magicsq/census.hpp"
#include "magicsq/complexity.hpp"
#include "magicsq/ehrhart.hpp"
#include "magicsq/linalg.hpp"
#include "magicsq/local_factors.hpp"
#include "magicsq/polytope.hpp"
#include "magicsq/singular_series.hpp"

using namespace magicsq;

namespace {

struct Global {
    std::string format = "pretty";  // pretty | json | csv
    std::string cache_dir;
    int jobs = 1;
};

std::filesystem::path resolve_cache_dir(const Global& g) {
    if (!g.cache_dir.empty()) return g.cache_dir;
    if (const char* env = std::getenv("MAGICSQ_CACHE_DIR"); env && *env) return env;
    if (const char* home = std::getenv("HOME"); home && *home)
        return std::filesystem::path(home) / ".cache" / "magicsq";
    return std::filesystem::temp_directory_path() / "magicsq-cache";
}

void print_json(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

// Parse "2..13" or a single prime "7".
std::pair<unsigned long long, unsigned long long> parse_prime_range(const std::string& s) {
    auto dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            unsigned long long p = std::stoull(s);
            return {p, p};
        }
        return {std::stoull(s.substr(0, dots)), std::stoull(s.substr(dots + 2))};
    } catch (const std::exception&) {
        throw ValidationError("cannot parse prime range: " + s);
    }
}

Quasipolynomial quasipolynomial_for(const FormSystem& sys, long long period,
                                    const std::filesystem::path& cache, int jobs) {
    CountTable table = CountTable::load(cache, sys);
    if (period <= 0) {
        VertexSet vs = enumerate_vertices(sys);
        period = (long long)vs.denominator_lcm.get_si();
    }
    Quasipolynomial qp = interpolate_quasipolynomial(sys, period, &table, jobs);
    table.save(cache);
    return qp;
}

int cmd_basis(const Global& g, int n) {
    FormSystem sys = build_system(n);
    std::string why;
    bool ok = verify_z_basis(sys, &why);
    if (g.format == "json") {
        nlohmann::json j = sys.to_json();
        j["verified"] = ok;
        if (!ok) j["failure"] = why;
        print_json(j);
    } else {
        std::cout << "n=" << sys.n << " d=" << sys.d << " t=" << sys.t << "\n";
        std::cout << "skeleton cells:";
        for (int c : sys.skeleton) std::cout << " " << c;
        std::cout << "\nunit point:";
        for (long long u : sys.unit_point) std::cout << " " << u;
        std::cout << "\nforms (cell: coefficients):\n";
        for (const auto& f : sys.forms) {
            std::cout << "  " << f.cell << ":";
            for (long long c : f.coeffs) std::cout << " " << c;
            std::cout << "\n";
        }
        std::cout << "verified: " << (ok ? "yes" : ("NO - " + why)) << "\n";
    }
    if (!ok) {
        std::cerr << "basis verification failed: " << why << "\n";
        return 1;
    }
    return 0;
}

int cmd_complexity(const Global& g, int n) {
    FormSystem sys = build_system(n);
    ComplexityReport rep = system_complexity(sys);
    if (g.format == "json") {
        print_json(rep.to_json());
    } else {
        std::cout << "n=" << rep.n << " complexity s=" << rep.s
                  << (rep.exhaustive ? " (exhaustive search)" : " (verified certificates)")
                  << "\n";
        std::cout << "witness form: cell " << rep.witness_form + 1 << "\n";
        std::cout << "per-form:";
        for (int s : rep.per_form) std::cout << " " << s;
        std::cout << "\n";
    }
    return 0;
}

int cmd_vertices(const Global& g, int n) {
    FormSystem sys = build_system(n);
    VertexSet vs = enumerate_vertices(sys);
    if (g.format == "json") {
        print_json(vs.to_json());
    } else if (g.format == "csv") {
        for (const auto& v : vs.vertices) {
            for (size_t j = 0; j < v.size(); ++j)
                std::cout << (j ? "," : "") << rat_to_string(v[j]);
            std::cout << "\n";
        }
    } else {
        std::cout << vs.vertices.size() << " vertices, denominator lcm "
                  << vs.denominator_lcm.get_str() << "\n";
        for (const auto& v : vs.vertices) {
            for (size_t j = 0; j < v.size(); ++j)
                std::cout << (j ? " " : "") << rat_to_string(v[j]);
            std::cout << "\n";
        }
    }
    return 0;
}

int cmd_ehrhart(const Global& g, int n, long long period, const std::vector<long long>& evals) {
    if (n >= 5) {
        int d = n * n - 2 * n;
        std::cerr << "ehrhart: refused for n=" << n << ": the counting quasipolynomial has "
                  << "degree " << d << " and its period is a multiple of the vertex "
                  << "denominator lcm (already >= 840 for n=5), so interpolation needs at "
                  << "least " << (d + 1) << " * 840 = " << (d + 1) * 840
                  << " exact lattice-point counts, the largest at dilation ~"
                  << (d + 1) * 840 - 1 << " in " << d
                  << " dimensions; that is beyond desk scale.\n";
        return 2;
    }
    FormSystem sys = build_system(n);
    Quasipolynomial qp = quasipolynomial_for(sys, period, resolve_cache_dir(g), g.jobs);
    if (g.format == "json") {
        nlohmann::json j = qp.to_json();
        if (!evals.empty()) {
            nlohmann::json je = nlohmann::json::object();
            for (long long N : evals) je[std::to_string(N)] = rat_to_string(qp.eval(N));
            j["eval"] = je;
        }
        print_json(j);
    } else {
        std::cout << "degree " << qp.degree << ", period " << qp.period << "\n";
        for (size_t r = 0; r < qp.branches.size(); ++r) {
            std::cout << "N mod " << qp.period << " = " << r << ":";
            for (const auto& c : qp.branches[r]) std::cout << " " << rat_to_string(c);
            std::cout << "\n";
        }
        for (long long N : evals)
            std::cout << "E(" << N << ") = " << rat_to_string(qp.eval(N)) << "\n";
    }
    return 0;
}

int cmd_local_factors(const Global& g, int n, const std::string& prange) {
    FormSystem sys = build_system(n);
    auto [plo, phi] = parse_prime_range(prange);
    StablePolynomial sp = stable_polynomial(sys);
    std::vector<LocalFactor> rows;
    for (unsigned long long p = plo; p <= phi; ++p)
        if (is_prime_u64(p)) rows.push_back(local_factor(sys, p, &sp));
    if (g.format == "json") {
        nlohmann::json j{{"n", n}, {"p0", sp.p0}, {"stable_polynomial", sp.to_json()}};
        nlohmann::json jr = nlohmann::json::array();
        for (const auto& lf : rows)
            jr.push_back({{"p", lf.p},
                          {"count", lf.count.get_str()},
                          {"beta", rat_to_string(lf.beta)},
                          {"beta_decimal", lf.beta.get_d()}});
        j["factors"] = jr;
        print_json(j);
    } else {
        std::cout << "p,count,beta,beta_decimal\n";
        for (const auto& lf : rows) {
            char buf[32];
            snprintf(buf, sizeof buf, "%.12g", lf.beta.get_d());
            std::cout << lf.p << "," << lf.count.get_str() << "," << rat_to_string(lf.beta)
                      << "," << buf << "\n";
        }
    }
    return 0;
}

int cmd_constant(const Global& g, int n, unsigned long long pmax, int digits) {
    FormSystem sys = build_system(n);
    StablePolynomial sp = stable_polynomial(sys);
    Quasipolynomial qp = quasipolynomial_for(sys, 0, resolve_cache_dir(g), g.jobs);
    SingularConstant sc = singular_constant(sys, volume(qp), pmax, digits, &sp);
    if (g.format == "json") {
        print_json(sc.to_json());
    } else {
        std::cout << "n=" << sc.n << " volume=" << rat_to_string(sc.volume)
                  << " prefactor=" << rat_to_string(sc.prefactor) << " (p0=" << sc.p0 << ")\n";
        std::cout << "constant (P_max=" << sc.p_max << ", " << sc.digits
                  << " digits): " << sc.value << "\n";
        std::cout << "relative tail estimate: " << sc.tail_error_estimate << "\n";
    }
    return 0;
}

int cmd_census(const Global& g, int n, long long N, long long budget,
               const std::string& resume) {
    CensusOptions opts;
    opts.budget = budget;
    opts.resume = resume;
    opts.jobs = g.jobs;
    CensusResult res = census(n, N, opts);

    double predicted = 0, ratio = 0;
    bool have_prediction = false;
    if (res.complete && N >= 3) {
        FormSystem sys = build_system(n);
        StablePolynomial sp = stable_polynomial(sys);
        Quasipolynomial qp = quasipolynomial_for(sys, 0, resolve_cache_dir(g), g.jobs);
        SingularConstant sc = singular_constant(sys, volume(qp), 100000, 12, &sp);
        predicted = predicted_count(sc, double(N));
        ratio = res.total.get_d() / predicted;
        have_prediction = true;
    }

    if (g.format == "json") {
        nlohmann::json j = res.to_json();
        if (have_prediction) {
            j["predicted"] = predicted;
            j["ratio"] = ratio;
        }
        print_json(j);
    } else if (g.format == "csv") {
        std::cout << "N,total,distinct,predicted,ratio\n";
        std::cout << N << "," << res.total.get_str() << "," << res.distinct_count.get_str()
                  << ",";
        if (have_prediction) {
            char buf[64];
            snprintf(buf, sizeof buf, "%.6g,%.6g", predicted, ratio);
            std::cout << buf;
        } else {
            std::cout << ",";
        }
        std::cout << "\n";
    } else {
        std::cout << "n=" << n << " N=" << N << ": total " << res.total.get_str()
                  << ", distinct " << res.distinct_count.get_str() << "\n";
        if (have_prediction)
            std::cout << "predicted " << predicted << ", ratio " << ratio << "\n";
        if (!res.complete)
            std::cout << "budget exhausted; resume with --resume '" << res.resume_token
                      << "'\n";
    }
    return res.complete ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact pipeline for counting magic squares of primes"};
    app.require_subcommand(1);
    Global g;
    app.add_option("--format", g.format, "Output format")
        ->check(CLI::IsMember({"pretty", "json", "csv"}))
        ->capture_default_str();
    app.add_option("--cache-dir", g.cache_dir,
                   "Count-cache directory (default: $MAGICSQ_CACHE_DIR or ~/.cache/magicsq)");
    app.add_option("--jobs", g.jobs, "Worker threads for counting")->capture_default_str();

    int n = 3;
    long long period = 0, N = 100, budget = -1;
    std::vector<long long> evals;
    std::string prange = "2..13", resume;
    unsigned long long pmax = 100000;
    int digits = 12;

    auto* basis = app.add_subcommand("basis", "Build and verify the Z-basis of linear forms");
    basis->add_option("--n", n, "Square size")->required();

    auto* complexity = app.add_subcommand("complexity", "Cauchy-Schwarz complexity profile");
    complexity->add_option("--n", n, "Square size")->required();

    auto* vertices = app.add_subcommand("vertices", "Vertices of the unit coefficient polytope");
    vertices->add_option("--n", n, "Square size")->required();

    auto* ehrhart = app.add_subcommand("ehrhart", "Counting quasipolynomial by interpolation");
    ehrhart->add_option("--n", n, "Square size")->required();
    ehrhart->add_option("--period", period, "Period override (0 = vertex denominator lcm)");
    ehrhart->add_option("--eval", evals, "Evaluate the result at these dilations");

    auto* local = app.add_subcommand("local-factors", "Local densities beta_p");
    local->add_option("--n", n, "Square size")->required();
    local->add_option("--p", prange, "Prime or range, e.g. 7 or 2..13")->required();

    auto* constant = app.add_subcommand("constant", "Truncated singular-series constant");
    constant->add_option("--n", n, "Square size")->required();
    constant->add_option("--pmax", pmax, "Truncation point")->capture_default_str();
    constant->add_option("--digits", digits, "Significant digits")->capture_default_str();

    auto* census_cmd = app.add_subcommand("census", "Exhaustive census of prime magic squares");
    census_cmd->add_option("--n", n, "Square size (3 or 4)")->required();
    census_cmd->add_option("--N", N, "Entry bound")->required();
    census_cmd->add_option("--budget", budget, "Operation budget (-1 = unlimited)");
    census_cmd->add_option("--resume", resume, "Resume token from a partial run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (basis->parsed()) return cmd_basis(g, n);
        if (complexity->parsed()) return cmd_complexity(g, n);
        if (vertices->parsed()) return cmd_vertices(g, n);
        if (ehrhart->parsed()) return cmd_ehrhart(g, n, period, evals);
        if (local->parsed()) return cmd_local_factors(g, n, prange);
        if (constant->parsed()) return cmd_constant(g, n, pmax, digits);
        if (census_cmd->parsed()) return cmd_census(g, n, N, budget, resume);
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
