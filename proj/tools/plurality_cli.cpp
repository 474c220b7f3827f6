#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "plurality/io.hpp"
#include "plurality/plurality.hpp"

namespace {

using namespace plurality;

constexpr int kUsage = 2;
constexpr int kDegenerate = 3;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Flags {
    std::string in = "-";
    std::string out = "-";
    std::string method;
    std::string mode = "exact";
    std::string kind;
    std::string point;
    std::optional<double> beta;
    double eps = 0.1;
    double tol = 1e-9;
    std::uint64_t seed = 0;
    std::size_t n = 10;
    std::size_t dim = 2;
};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

io::ResultParams params_of(const Flags& f) { return {f.eps, f.tol, f.seed}; }

Point require_point(const Flags& f, const VoterSet& voters) {
    if (f.point.empty()) throw UsageError("--point is required");
    Point p = io::parse_point(f.point);
    if (p.dim() != voters.dim()) {
        throw UsageError("point has dimension " + std::to_string(p.dim()) + ", instance has " +
                         std::to_string(voters.dim()));
    }
    return p;
}

int cmd_gen(const Flags& f) {
    const auto kind = io::parse_kind(f.kind);
    const VoterSet voters = io::generate(kind, f.n, f.dim, f.seed);
    io::write_all(f.out, io::format_instance(voters, f.out));
    return 0;
}

int cmd_eval(const Flags& f) {
    const VoterSet voters = io::load_instance(f.in);
    const Point p = require_point(f, voters);
    const auto start = std::chrono::steady_clock::now();
    BetaBracket br;
    if (f.mode == "exact") {
        if (voters.dim() != 2) throw UsageError("exact mode needs a planar instance; use --mode approx");
        br = exact_beta_of_point_2d(voters, p, f.tol);
    } else if (f.mode == "approx") {
        br = approx_beta_of_point(voters, p, f.eps);
    } else {
        throw UsageError("unknown mode '" + f.mode + "'");
    }
    const io::ResultRecord r{"eval", p, br.lo, br.hi, elapsed_ms(start), params_of(f)};
    io::write_all(f.out, io::to_json_line(r));
    return 0;
}

int cmd_find(const Flags& f) {
    const VoterSet voters = io::load_instance(f.in);
    const auto start = std::chrono::steady_clock::now();
    io::ResultRecord r;
    r.method = f.method;
    r.params = params_of(f);
    if (f.method == "median") {
        r.point = median_point(voters);
        if (voters.dim() == 2) {
            const BetaBracket br = exact_beta_of_point_2d(voters, r.point, f.tol);
            r.beta_lo = br.lo;
            r.beta_hi = br.hi;
        } else {
            // no exact decision beyond the plane; report the guaranteed floor
            r.beta_lo = 1.0 / std::sqrt(static_cast<double>(voters.dim()));
            r.beta_hi = 1.0;
        }
    } else if (f.method == "planar") {
        if (voters.dim() != 2) throw UsageError("planar method needs a planar instance");
        PlanarOptions opt;
        opt.seed = f.seed;
        r.point = planar_point(voters, opt);
        const BetaBracket br = exact_beta_of_point_2d(voters, r.point, f.tol);
        r.beta_lo = br.lo;
        r.beta_hi = br.hi;
    } else if (f.method == "approx") {
        require_eps(f.eps);
        BestPointOptions opt;
        opt.grid.rotation_seed = f.seed;
        const BestPointResult best = approx_best_point(voters, f.eps, opt);
        r.point = best.point;
        r.beta_lo = best.bracket.lo;
        r.beta_hi = best.bracket.hi;
    } else if (f.method == "oracle") {
        if (voters.dim() != 2) throw UsageError("oracle method needs a planar instance");
        if (voters.size() > 15) std::cerr << "warning: oracle search is meant for n <= 15\n";
        const BestPointResult best = oracle_best_point(voters, 41, f.tol);
        r.point = best.point;
        r.beta_lo = best.bracket.lo;
        r.beta_hi = best.bracket.hi;
    } else {
        throw UsageError("unknown method '" + f.method + "'");
    }
    r.runtime_ms = elapsed_ms(start);
    io::write_all(f.out, io::to_json_line(r));
    return 0;
}

int cmd_plot(const Flags& f) {
    const VoterSet voters = io::load_instance(f.in);
    if (voters.dim() != 2) throw UsageError("plots need a planar instance");
    const Point p = f.point.empty() ? planar_point(voters) : require_point(f, voters);
    const double beta = f.beta ? *f.beta : exact_beta_of_point_2d(voters, p, f.tol).lo;
    io::write_all(f.out, io::render_svg(voters, p, beta));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Beta-plurality points: generate instances, evaluate and find points, plot disks"};
    app.require_subcommand(1);
    Flags f;

    auto* gen = app.add_subcommand("gen", "Generate an instance");
    gen->add_option("--kind", f.kind, "equilateral | random-uniform | random-gaussian | collinear")->required();
    gen->add_option("--n", f.n, "Number of voters")->check(CLI::PositiveNumber);
    gen->add_option("--dim", f.dim, "Dimension")->check(CLI::PositiveNumber);
    gen->add_option("--seed", f.seed, "Random seed");
    gen->add_option("--out", f.out, "Output file (.csv or .json), - for stdout");

    auto* eval = app.add_subcommand("eval", "Bracket beta(p, V) for a given point");
    eval->add_option("--in", f.in, "Instance file, - for stdin");
    eval->add_option("--out", f.out, "Result file, - for stdout");
    eval->add_option("--point", f.point, "x,y[,z...]")->required();
    eval->add_option("--mode", f.mode, "exact | approx")->check(CLI::IsMember({"exact", "approx"}));
    eval->add_option("--eps", f.eps, "Approximation parameter");
    eval->add_option("--tol", f.tol, "Bisection tolerance");
    eval->add_option("--seed", f.seed, "Echoed in the result");

    auto* find = app.add_subcommand("find", "Compute a good point");
    find->add_option("--in", f.in, "Instance file, - for stdin");
    find->add_option("--out", f.out, "Result file, - for stdout");
    find->add_option("--method", f.method, "median | planar | approx | oracle")
        ->required()
        ->check(CLI::IsMember({"median", "planar", "approx", "oracle"}));
    find->add_option("--eps", f.eps, "Approximation parameter");
    find->add_option("--tol", f.tol, "Bisection tolerance");
    find->add_option("--seed", f.seed, "Random seed");

    auto* plot = app.add_subcommand("plot", "Draw voters, p and the disks of radius beta |pv| as SVG");
    plot->add_option("--in", f.in, "Instance file, - for stdin");
    plot->add_option("--out", f.out, "SVG file, - for stdout");
    plot->add_option("--point", f.point, "x,y; default is the planar point");
    plot->add_option("--beta", f.beta, "Disk scale; default is beta(p, V)");
    plot->add_option("--tol", f.tol, "Bisection tolerance for the default beta");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (gen->parsed()) return cmd_gen(f);
        if (eval->parsed()) return cmd_eval(f);
        if (find->parsed()) return cmd_find(f);
        return cmd_plot(f);
    } catch (const CuttingDegeneracyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDegenerate;
    } catch (const SolverNumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDegenerate;
    } catch (const SampleBudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDegenerate;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDegenerate;
    }
}
