// Command-line front end: build and verify small polynomial models of number
// fields, reduce integral bases, run the exact minima oracle, and evaluate
// the explicit counting bounds.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nfmodel/nfmodel.hpp"

namespace {

constexpr const char* kVersion = "nfmodel 1.0.0";

std::string variable_name(size_t j, size_t r) {
    if (r == 1) return "x";
    return "x" + std::to_string(j + 1);
}

std::string render_equation(const nfmodel::ZVec& eq,
                            const std::vector<std::vector<unsigned>>& monos, size_t r) {
    std::ostringstream os;
    bool first = true;
    for (size_t c = eq.size(); c-- > 0;) {  // leading monomial first
        if (eq[c] == 0) continue;
        mpz_class a = eq[c];
        if (first) {
            if (a < 0) os << "-";
        } else {
            os << (a < 0 ? " - " : " + ");
        }
        mpz_class mag = abs(a);
        bool constant = true;
        for (auto e : monos[c])
            if (e) constant = false;
        if (mag != 1 || constant) os << mag.get_str();
        bool star = (mag != 1);
        for (size_t j = 0; j < monos[c].size(); ++j) {
            if (monos[c][j] == 0) continue;
            if (star) os << "*";
            os << variable_name(j, r);
            if (monos[c][j] > 1) os << "^" << monos[c][j];
            star = true;
        }
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

void print_report(const nfmodel::VerificationReport& rep) {
    std::cout << (rep.accepted ? "ACCEPTED" : "REJECTED") << "\n"
              << "  well_poised      " << (rep.well_poised ? "yes" : "no") << "\n"
              << "  eval_rank        " << rep.eval_rank << "\n"
              << "  residue_rank     " << rep.residue_rank << "\n"
              << "  vanishing        " << (rep.vanishing ? "exact" : "FAILED") << "\n"
              << "  jacobian_nonzero " << (rep.jacobian_nonzero ? "yes" : "no") << "\n"
              << "  vol(L)^2         " << rep.vol_relation_sq.get_str() << "\n"
              << "  vol identity     " << (rep.vol_identity_ok ? "exact" : "FAILED") << "\n"
              << "  vol bound        " << (rep.vol_bound_ok ? "holds" : "FAILED") << "\n"
              << "  max |coeff|      " << rep.max_abs_coeff.get_str() << "\n"
              << "  coeff bound B    " << nfmodel::format_decimal(rep.coeff_bound, 12) << "\n"
              << "  coeff/B          " << nfmodel::format_decimal(rep.ratio, 6) << "\n"
              << "  slacked bound    " << (rep.coeff_bound_ok ? "holds" : "FAILED") << "\n";
}

struct BoundsArgs {
    unsigned n = 0;
    std::string log10H = "0";
    std::string policy = "padded";
    bool as_json = false;
    unsigned n_from = 100, n_to = 1000000;
    unsigned factor = 10;
};

nfmodel::PolicySpec policy_spec(const std::string& policy, unsigned r, unsigned d) {
    nfmodel::PolicySpec spec;
    spec.kind = policy;
    spec.r = r;
    spec.d = d;
    return spec;
}

void print_count_bound(const nfmodel::CountBound& b, bool as_json) {
    if (as_json) {
        std::cout << nfmodel::count_bound_to_json(b).dump(2) << "\n";
        return;
    }
    std::cout << "n                " << b.n << "\n"
              << "log10 H          " << nfmodel::format_decimal(b.log10H, 12) << "\n"
              << "r, d             " << b.r << ", " << b.d << "\n"
              << "C = binom(d+r,r) " << b.C.get_str() << "\n"
              << "log10 B          " << nfmodel::format_decimal(b.log10B, 30) << "\n"
              << "log10 #models    " << nfmodel::format_decimal(b.log10_models, 30) << "\n"
              << "log10 #fields    " << nfmodel::format_decimal(b.log10_fields, 30) << "\n"
              << "H-exponent       " << nfmodel::format_decimal(b.h_exponent, 30) << "\n"
              << "Schmidt (n+2)/4  " << nfmodel::format_decimal(b.schmidt_exponent, 30) << "\n";
}

int run_scan(const BoundsArgs& args) {
    std::cout << std::left << std::setw(12) << "n" << std::setw(5) << "r" << std::setw(5) << "d"
              << std::setw(14) << "C" << std::setw(18) << "H-exponent" << std::setw(18)
              << "Schmidt" << "winner\n";
    unsigned crossover = 0;
    for (unsigned long n = args.n_from; n <= args.n_to; n *= args.factor) {
        auto row = nfmodel::exponent_summary(static_cast<unsigned>(n),
                                             policy_spec(args.policy, 0, 0));
        std::cout << std::left << std::setw(12) << n << std::setw(5) << row.r << std::setw(5)
                  << row.d << std::setw(14) << row.C.get_str() << std::setw(18)
                  << nfmodel::format_decimal(row.h_exponent, 10) << std::setw(18)
                  << nfmodel::format_decimal(row.schmidt_exponent, 10)
                  << (row.model_count_wins ? "model-count" : "schmidt") << "\n";
        if (row.model_count_wins && crossover == 0) crossover = static_cast<unsigned>(n);
        if (n > args.n_to / args.factor) break;  // overflow guard
    }
    if (crossover)
        std::cout << "model-count exponent first beats Schmidt at n = " << crossover
                  << " (within this scan)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"small polynomial models of number fields with explicit height bounds"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(0, 1);

    // global flags; subcommands may override them after the subcommand name
    unsigned precision = 128;
    uint64_t seed = 0;
    app.add_option("--precision", precision, "certification precision in bits (default 128)");
    app.add_option("--seed", seed, "seed for randomized strategies");

    // build
    auto* build = app.add_subcommand("build", "construct and verify a model from field.json");
    std::string build_field, build_out = "model.json", build_policy = "padded",
                build_strategy = "lex";
    unsigned build_r = 0, build_d = 0;
    uint64_t build_max_tries = 20000;
    build->add_option("--field", build_field, "field description JSON")->required();
    build->add_option("--policy", build_policy, "paper | padded | explicit");
    build->add_option("--r", build_r, "number of variables (explicit policy)");
    build->add_option("--d", build_d, "degree bound (explicit policy)");
    build->add_option("--strategy", build_strategy, "u search: lex | random");
    build->add_option("--seed", seed, "seed for the random strategy");
    build->add_option("--max-tries", build_max_tries, "u search try budget");
    build->add_option("--precision", precision, "certification precision in bits");
    build->add_option("--out", build_out, "output model JSON path");

    // verify
    auto* verify = app.add_subcommand("verify", "re-verify a model against its field");
    std::string verify_field, verify_model_path;
    verify->add_option("--field", verify_field, "field description JSON")->required();
    verify->add_option("--model", verify_model_path, "model JSON")->required();
    verify->add_option("--precision", precision, "certification precision in bits");

    // reduce-basis
    auto* reduce = app.add_subcommand("reduce-basis", "balanced independent set of the order");
    std::string reduce_field, reduce_out;
    reduce->add_option("--field", reduce_field, "field description JSON")->required();
    reduce->add_option("--precision", precision, "certification precision in bits");
    reduce->add_option("--out", reduce_out, "optional output JSON path");

    // oracle-minima
    auto* oracle = app.add_subcommand("oracle-minima", "exact successive minima (dim <= 5)");
    std::string oracle_lattice;
    oracle->add_option("--lattice", oracle_lattice, "lattice JSON (basis or gram)")->required();

    // bounds (+ scan)
    BoundsArgs bargs;
    auto* bounds = app.add_subcommand("bounds", "explicit field-count bound for degree n");
    bounds->add_option("--n", bargs.n, "field degree");
    bounds->add_option("--log10H", bargs.log10H, "log10 of the discriminant bound (rational)");
    bounds->add_option("--policy", bargs.policy, "paper | padded");
    bounds->add_flag("--json", bargs.as_json, "JSON output");
    auto* scan = bounds->add_subcommand("scan", "exponent table over a range of degrees");
    scan->add_option("--n-from", bargs.n_from, "first degree");
    scan->add_option("--n-to", bargs.n_to, "last degree");
    scan->add_option("--factor", bargs.factor, "geometric step (default 10)");
    scan->add_option("--policy", bargs.policy, "paper | padded");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*build) {
            nfmodel::NumberField K = nfmodel::load_field(build_field);
            nfmodel::PolicySpec spec = policy_spec(build_policy, build_r, build_d);
            nfmodel::ModelParams params = nfmodel::choose_parameters(K.n, spec);
            nfmodel::BuildOptions opt;
            opt.strategy = build_strategy;
            opt.seed = seed;
            opt.max_tries = build_max_tries;
            opt.precision = precision;
            nfmodel::SmallModel model = nfmodel::build_model(K, params, opt);
            nfmodel::write_json_file(build_out, nfmodel::model_to_json(model));
            std::cout << "model written to " << build_out << "\n";
            std::cout << "parameters: n=" << params.n << " r=" << params.r << " d=" << params.d
                      << " C=" << params.C.get_str() << " keep=" << params.keep.get_str() << "\n";
            std::cout << "u search: " << model.u_rejections << " rejected candidate(s)\n";
            for (size_t i = 0; i < model.equations.size(); ++i)
                std::cout << "E" << (i + 1) << " = "
                          << render_equation(model.equations[i], model.monos, params.r) << "\n";
            print_report(model.report);
            return model.report.accepted ? 0 : 1;
        }
        if (*verify) {
            nfmodel::NumberField K = nfmodel::load_field(verify_field);
            nfmodel::SmallModel model = nfmodel::load_model(verify_model_path, K);
            nfmodel::VerificationReport rep = nfmodel::verify_model(model, K, precision);
            print_report(rep);
            return rep.accepted ? 0 : 1;
        }
        if (*reduce) {
            nfmodel::NumberField K = nfmodel::load_field(reduce_field);
            auto [set, roots] = nfmodel::balanced_set_auto(K, precision);
            nfmodel::BalancedSetReport rep = nfmodel::norm_report(set, K);
            nfmodel::json out = nfmodel::balanced_set_to_json(set, rep);
            if (!reduce_out.empty()) nfmodel::write_json_file(reduce_out, out);
            std::cout << out.dump(2) << "\n";
            return rep.pass ? 0 : 1;
        }
        if (*oracle) {
            std::ifstream in(oracle_lattice);
            if (!in) throw nfmodel::input_error("cannot open lattice file: " + oracle_lattice);
            nfmodel::json j;
            in >> j;
            nfmodel::IntLattice lat = nfmodel::lattice_from_json(j);
            nfmodel::QVec minima = nfmodel::minima_oracle(lat);
            std::cout << "successive minima (squared):";
            for (const auto& m : minima) std::cout << " " << m.get_str();
            std::cout << "\n";
            return 0;
        }
        if (*bounds) {
            if (*scan) return run_scan(bargs);
            if (bargs.n == 0)
                throw nfmodel::input_error("bounds: --n is required (or use bounds scan)");
            nfmodel::CountBound b = nfmodel::count_bound(
                bargs.n, nfmodel::parse_rational(bargs.log10H), policy_spec(bargs.policy, 0, 0));
            print_count_bound(b, bargs.as_json);
            return 0;
        }
        std::cout << app.help() << "\n";
        return 0;
    } catch (const nfmodel::input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const nfmodel::search_exhausted& e) {
        std::cerr << "search exhausted after " << e.tries << " tries: " << e.what() << "\n";
        return 2;
    } catch (const nfmodel::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
