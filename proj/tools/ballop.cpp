// ballop: command-line front end for the ball composition-operator laboratory.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>

#include "ballop/adjointlab.hpp"
#include "ballop/commutator.hpp"
#include "ballop/dirichletops.hpp"
#include "ballop/mapspec.hpp"
#include "ballop/multiindex.hpp"
#include "ballop/opalg.hpp"
#include "ballop/spaces.hpp"
#include "ballop/version.hpp"

using namespace ballop;

namespace {

struct Options {
    std::string space = "hardy";
    double s = 0.0;
    int dim = 1;
    std::string map;
    std::string map2;
    int order = 16;       // D
    int rmax_exp = 20;
    int samples = 16;
    std::uint64_t seed = 0;
    std::string out;
    std::string csv;
    std::string dump;
    std::string theorem = "3.1";
    std::string omega;
    bool check_normalization = false;  // --lemma34
    bool check_inverse_form = false;   // --lemma36
    bool check_factorization = false;  // --lemma37
};

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--space", opt.space, "hardy | bergman | dirichlet")
        ->check(CLI::IsMember({"hardy", "bergman", "dirichlet"}));
    cmd->add_option("--s", opt.s, "Bergman weight parameter (s > -1)");
    cmd->add_option("--N", opt.dim, "complex dimension of the ball");
    cmd->add_option("--map", opt.map, "map spec: inline JSON or a file path");
    cmd->add_option("--map2", opt.map2, "second map spec");
    cmd->add_option("--D", opt.order, "truncation degree");
    cmd->add_option("--rmax-exp", opt.rmax_exp, "deepest radius 1 - 2^-k of the scans");
    cmd->add_option("--samples", opt.samples, "sample count (points or directions)");
    cmd->add_option("--seed", opt.seed, "seed for sampled points and directions");
    cmd->add_option("--out", opt.out, "write the JSON report here (default stdout)");
}

Json base_report(const char* command, const Options& opt) {
    Json j;
    j["version"] = kVersion;
    j["command"] = command;
    Json cfg;
    cfg["space"] = opt.space;
    cfg["s"] = opt.s;
    cfg["N"] = opt.dim;
    cfg["map"] = opt.map;
    cfg["map2"] = opt.map2;
    cfg["D"] = opt.order;
    cfg["rmax_exp"] = opt.rmax_exp;
    cfg["samples"] = opt.samples;
    cfg["seed"] = opt.seed;
    cfg["out"] = opt.out;
    cfg["csv"] = opt.csv;
    cfg["dump"] = opt.dump;
    cfg["theorem"] = opt.theorem;
    cfg["omega"] = opt.omega;
    j["config"] = cfg;
    return j;
}

void emit(const Json& report, const Options& opt) {
    std::string text = report.dump(2);
    text.push_back('\n');
    if (opt.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(opt.out, std::ios::binary);
        out << text;
    }
}

CVec random_interior_point(int dim, std::mt19937_64& rng, double radius) {
    std::normal_distribution<double> gauss;
    CVec z(dim);
    for (int i = 0; i < dim; ++i) z(i) = Cplx(gauss(rng), gauss(rng));
    std::uniform_real_distribution<double> unif(0.05, radius);
    return z * (unif(rng) / z.norm());
}

PowerSeries default_mixed_symbol(int dim) {
    CVec coeffs = CVec::Zero(dim);
    coeffs(0) = 0.5;
    return PowerSeries::affine(coeffs, Cplx(1.0, 0.0), 1);
}

int cmd_adjoint_check(const Options& opt) {
    SpaceSpec space = parse_space(opt.space, opt.dim, opt.s);
    if (space.kind == SpaceKind::Dirichlet)
        throw std::invalid_argument("adjoint-check runs on hardy or bergman");
    LinearFractionalMap phi = load_map_spec(opt.map);
    if (phi.dim() != opt.dim) throw std::invalid_argument("map dimension does not match --N");

    Json report = base_report("adjoint-check", opt);
    Json results = Json::array();
    bool pass = true;

    {
        AuxiliaryTriple aux = auxiliary_functions(space, phi);
        std::mt19937_64 rng(opt.seed);
        double worst = 0.0;
        for (int i = 0; i < opt.samples; ++i) {
            CVec z = random_interior_point(opt.dim, rng, 0.95);
            CVec w = random_interior_point(opt.dim, rng, 0.95);
            worst = std::max(worst, adjoint_identity_residual(space, aux, z, w));
        }
        bool ok = worst < 1e-10;
        pass = pass && ok;
        Json r;
        r["identity"] = "adjoint-factorization";
        r["space"] = space.name();
        r["map"] = map_to_json(phi);
        r["samples"] = opt.samples;
        r["residual"] = worst;
        r["stable"] = ok;
        results.push_back(r);
    }

    if (opt.check_normalization) {
        if (opt.dim != 1) throw std::invalid_argument("--lemma34 is disk-only");
        LinearFractionalMap dn = determinant_normalized(phi);
        double t = space.kernel_exponent();
        std::mt19937_64 rng(opt.seed + 1);
        std::uniform_real_distribution<double> unif(0.0, 2.0 * M_PI);
        double worst = 0.0;
        for (int i = 0; i < opt.samples; ++i)
            worst = std::max(worst,
                             normalization_identity_residual(t, dn, std::polar(1.0, unif(rng))));
        bool asserted = std::abs(t - 1.0) < 1e-12;
        bool ok = !asserted || worst < 1e-12;
        pass = pass && ok;
        Json r;
        r["identity"] = "auxiliary-normalization";
        r["space"] = space.name();
        r["samples"] = opt.samples;
        r["residual"] = worst;
        r["asserted"] = asserted;
        r["stable"] = ok;
        results.push_back(r);
    }

    if (opt.check_inverse_form) {
        OperatorResidualReport rep = adjoint_inverse_form_residual(space, phi, opt.order);
        bool ok = rep.residual < 1e-5;
        pass = pass && ok;
        Json r;
        r["identity"] = "adjoint-inverse-form";
        r["space"] = space.name();
        r["D"] = rep.block_order;
        r["working_D"] = rep.working_order;
        r["residual"] = rep.residual;
        r["stability"] = rep.stability;
        r["stable"] = ok;
        results.push_back(r);
    }

    if (opt.check_factorization) {
        PowerSeries u = default_mixed_symbol(opt.dim);
        CVec e1 = CVec::Zero(opt.dim);
        e1(0) = 1.0;
        SemiCommutatorReport rep = semicommutator_factorization_report(
            space, phi, u, u, std::min(opt.order, opt.dim == 1 ? 12 : 8), BoundaryPoint(e1));
        bool ok = rep.factorization_residual < 1e-8 && rep.kernel_converged;
        pass = pass && ok;
        Json r;
        r["identity"] = "semicommutator-factorization";
        r["space"] = space.name();
        r["D"] = rep.block_order;
        r["residual"] = rep.factorization_residual;
        r["kernel_limit"] = rep.kernel_limit;
        r["kernel_error"] = rep.kernel_error;
        r["stable"] = ok;
        results.push_back(r);
    }

    report["results"] = results;
    report["pass"] = pass;
    emit(report, opt);
    return pass ? 0 : 1;
}

CVec parse_direction(const std::string& text, int dim) {
    if (text.empty()) {
        CVec e1 = CVec::Zero(dim);
        e1(0) = 1.0;
        return e1;
    }
    Json j = Json::parse(text);
    CVec v(dim);
    for (int i = 0; i < dim; ++i) {
        const Json& e = j[static_cast<std::size_t>(i)];
        v(i) = e.is_number() ? Cplx(e.get<double>(), 0.0)
                             : Cplx(e[0].get<double>(), e[1].get<double>());
    }
    return v / v.norm();
}

int cmd_limit_scan(const Options& opt) {
    SpaceSpec space = parse_space(opt.space, opt.dim, opt.s);
    LinearFractionalMap phi = load_map_spec(opt.map);
    LinearFractionalMap psi = opt.map2.empty() ? phi : load_map_spec(opt.map2);

    CVec omega = parse_direction(opt.omega, opt.dim);
    CVec z1 = phi.inverse().eval(omega);
    CVec z2 = psi.inverse().eval(omega);
    LimitScan scan = kernel_cross_limit_scan(space, phi, psi, BoundaryPoint::direction(z1),
                                             BoundaryPoint::direction(z2), 4, opt.rmax_exp);

    if (!opt.csv.empty()) {
        std::ofstream csv(opt.csv, std::ios::binary);
        csv << "r,value_re,value_im,abs\n";
        char line[256];
        for (std::size_t i = 0; i < scan.radii.size(); ++i) {
            std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g\n", scan.radii[i],
                          scan.values[i].real(), scan.values[i].imag(),
                          std::abs(scan.values[i]));
            csv << line;
        }
    }

    Json report = base_report("limit-scan", opt);
    report["predicted"] = scan.predicted;
    report["extrapolated"] = cplx_to_json(scan.extrapolated);
    report["extrapolation_error"] = scan.error_estimate;
    report["d_phi"] = scan.d_phi;
    report["d_psi"] = scan.d_psi;
    report["agreement"] = scan.agrees;
    report["r_max"] = scan.radii.empty() ? 0.0 : scan.radii.back();
    emit(report, opt);
    return scan.agrees ? 0 : 1;
}

void write_matrix_csv(const std::string& path, const SpaceSpec& space,
                      const Eigen::MatrixXcd& m, int order) {
    std::ofstream out(path, std::ios::binary);
    out << "space,N,D\n" << space.name() << "," << space.dim << "," << order << "\n";
    char buf[128];
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g", m(i, j).real(), m(i, j).imag());
            out << buf << (j + 1 < m.cols() ? "," : "");
        }
        out << "\n";
    }
}

int cmd_verdict(const Options& opt) {
    LinearFractionalMap phi = load_map_spec(opt.map);
    LinearFractionalMap psi = load_map_spec(opt.map2);
    Json report = base_report("verdict", opt);
    report["theorem"] = opt.theorem;

    int exit_code = 0;
    if (opt.theorem == "3.1") {
        SpaceSpec space = parse_space(opt.space, opt.dim, opt.s);
        if (space.kind == SpaceKind::Dirichlet)
            throw std::invalid_argument("theorem 3.1 runs on hardy or bergman");
        CommutatorVerdict v = automorphism_commutator_verdict(space, phi, psi, opt.samples,
                                                              opt.order, opt.seed);
        report["space"] = space.name();
        report["predicate"] = v.predicate;
        report["score"] = v.score;
        report["floor"] = v.floor;
        report["r_max"] = 1.0 - std::ldexp(1.0, -(space.dim == 1 ? 13 : 8));
        report["D"] = opt.order;
        report["verdict"] = v.label;
        report["agreement"] = !v.inconclusive;
        exit_code = v.inconclusive ? 1 : 0;
    } else if (opt.theorem == "4.2" || opt.theorem == "4.3" || opt.theorem == "4.4") {
        if (opt.space != "dirichlet")
            throw std::invalid_argument("theorems 4.2-4.4 run on the dirichlet space");
        if (opt.theorem == "4.2") {
            CommutatorVerdict v = dirichlet_selfmap_commutator_verdict(phi, psi, opt.order);
            report["predicate"] = v.predicate;
            report["floor"] = v.floor;
            report["zero_commutator"] = v.zero_commutator;
            report["sup_phi"] = v.sup_phi;
            report["sup_psi"] = v.sup_psi;
            LinearFractionalMap sigma = krein_adjoint(psi);
            report["sup_phi_sigma"] = sup_norm(compose(phi, sigma));
            report["sup_sigma_phi"] = sup_norm(compose(sigma, phi));
            report["verdict"] = v.label;
            report["agreement"] = !v.inconclusive;
            exit_code = v.inconclusive ? 1 : 0;
        } else if (opt.theorem == "4.3") {
            CommutatorVerdict v = dirichlet_automorphism_commutator_verdict(phi, psi, opt.order);
            report["predicate"] = v.predicate;
            report["floor"] = v.floor;
            report["verdict"] = v.label;
            report["agreement"] = !v.inconclusive;
            exit_code = v.inconclusive ? 1 : 0;
        } else {
            DiskPairReport rep = disk_nonautomorphism_pair_classify(phi, psi, opt.order);
            const char* label = rep.pair_case == DiskPairCase::BothParabolicSharedPoint
                                    ? "both-parabolic-shared-point"
                                    : rep.pair_case == DiskPairCase::HyperbolicConjugatePair
                                          ? "hyperbolic-conjugate-pair"
                                          : "neither";
            report["classification"] = label;
            report["shared_point"] = cplx_to_json(rep.shared_point);
            report["floor"] = rep.floor;
            report["verdict"] =
                rep.pair_case == DiskPairCase::Neither ? "non-compact" : "non-trivially compact";
            report["agreement"] = true;
        }
    } else {
        throw std::invalid_argument("theorem selector must be one of 3.1, 4.2, 4.3, 4.4");
    }
    emit(report, opt);
    return exit_code;
}

int cmd_commutator_report(const Options& opt) {
    SpaceSpec space = parse_space(opt.space, opt.dim, opt.s);
    if (space.kind == SpaceKind::Dirichlet)
        throw std::invalid_argument("commutator-report runs on hardy or bergman");
    LinearFractionalMap phi = load_map_spec(opt.map);
    LinearFractionalMap psi = load_map_spec(opt.map2);

    KernelScoreReport rep = commutator_kernel_score(space, phi, psi, opt.samples, opt.order,
                                                    opt.seed, std::min(opt.rmax_exp, 13));
    Json report = base_report("commutator-report", opt);
    report["space"] = space.name();
    report["score"] = rep.score;
    report["direction_scores"] = rep.direction_scores;
    report["floors"] = rep.floors;
    report["r_max"] = 1.0 - std::ldexp(1.0, -rep.k_max);
    report["D"] = rep.max_order;

    if (!opt.dump.empty()) {
        GradedOperator x = commutator_matrix(space, phi, psi, opt.order);
        write_matrix_csv(opt.dump, space, x.mat, opt.order);
        report["dump"] = opt.dump;
    }
    emit(report, opt);
    return 0;
}

int cmd_dirichlet_report(const Options& opt) {
    LinearFractionalMap phi = load_map_spec(opt.map);
    LinearFractionalMap psi = load_map_spec(opt.map2);

    int probe = std::min(opt.order, 8);
    const GradedBasis& basis = shared_basis(phi.dim(), probe);
    double worst_gap = 0.0;
    double worst_norm = 0.0;
    for (int p = 0; p < basis.size(); ++p) {
        PowerSeries mono(phi.dim(), probe);
        mono.coeffs()(p) = 1.0;
        PowerSeries a = dirichlet_commutator_apply(phi, psi, mono, opt.order);
        PowerSeries b = dirichlet_commutator_apply_compositional(phi, psi, mono, opt.order);
        worst_gap = std::max(worst_gap, std::sqrt(dirichlet_norm_sq(a - b)));
        worst_norm = std::max(worst_norm, std::sqrt(dirichlet_norm_sq(a)));
    }

    Json report = base_report("dirichlet-report", opt);
    report["two_route_gap"] = worst_gap;
    report["max_monomial_image_norm"] = worst_norm;
    report["zero_commutator"] = worst_norm < 1e-9;
    report["probe_degree"] = probe;
    report["pass"] = worst_gap < 1e-10;
    emit(report, opt);
    return worst_gap < 1e-10 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ballop: linear-fractional composition operators on the unit ball"};
    app.require_subcommand(1);
    Options opt;

    CLI::App* adjoint = app.add_subcommand("adjoint-check", "verify the adjoint identities");
    add_common(adjoint, opt);
    adjoint->add_flag("--lemma34", opt.check_normalization,
                      "also check the determinant-normalized auxiliary identity (disk)");
    adjoint->add_flag("--lemma36", opt.check_inverse_form,
                      "also check the automorphism inverse adjoint form");
    adjoint->add_flag("--lemma37", opt.check_factorization,
                      "also check the semi-commutator factorization and kernel decay");

    CLI::App* scan = app.add_subcommand("limit-scan", "radial kernel cross-pairing scan");
    add_common(scan, opt);
    scan->add_option("--csv", opt.csv, "write the r-sweep as CSV");
    scan->add_option("--omega", opt.omega, "shared boundary image (JSON vector)");

    CLI::App* verdict = app.add_subcommand("verdict", "commutator compactness verdicts");
    add_common(verdict, opt);
    verdict->add_option("--theorem", opt.theorem, "3.1 | 4.2 | 4.3 | 4.4");

    CLI::App* creport = app.add_subcommand("commutator-report", "kernel score and singular floors");
    add_common(creport, opt);
    creport->add_option("--dump", opt.dump, "write the commutator section as CSV");

    CLI::App* dreport = app.add_subcommand("dirichlet-report",
                                           "two-route Dirichlet commutator check and zero test");
    add_common(dreport, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(adjoint)) return cmd_adjoint_check(opt);
        if (app.got_subcommand(scan)) return cmd_limit_scan(opt);
        if (app.got_subcommand(verdict)) return cmd_verdict(opt);
        if (app.got_subcommand(creport)) return cmd_commutator_report(opt);
        if (app.got_subcommand(dreport)) return cmd_dirichlet_report(opt);
    } catch (const HypothesisError& e) {
        std::cerr << "hypothesis violation: " << e.what() << "\n";
        return 3;
    } catch (const Json::exception& e) {
        std::cerr << "spec parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
