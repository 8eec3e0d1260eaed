#include "ahspec/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "ahspec/asymptotics.hpp"
#include "ahspec/errors.hpp"
#include "ahspec/params.hpp"
#include "ahspec/quadrature.hpp"
#include "ahspec/records_io.hpp"
#include "ahspec/rootfind.hpp"
#include "ahspec/shooting.hpp"

namespace ahspec {

namespace {

struct RunConfig {
    int k = -1;
    int l = -1;
    int M = 0;
    int M_from = 0;
    int M_to = 0;
    std::string seed;
    std::string center;
    std::string zeta;
    double radius = 0.0;
    int samples = kMinWindingSamples;
    double tol = 1e-12;
    double quad_tol = 1e-12;
    double alpha = 0.0;
    std::vector<double> T;
    bool no_winding = false;
    unsigned threads = 0;
    int profile_samples = 201;
    std::string output_path;
    std::string output_format = "csv";
    ShootingConfig shooting;
};

void add_params(CLI::App* sub, RunConfig& rc) {
    sub->add_option("--k", rc.k, "exponent k")->required();
    sub->add_option("--l", rc.l, "exponent l")->required();
}

void add_shooting(CLI::App* sub, RunConfig& rc) {
    auto& s = rc.shooting;
    sub->add_option("--x-inf", s.x_inf, "truncation radius (0 = automatic)");
    sub->add_option("--x-match", s.x_match, "matching point");
    sub->add_option("--rtol", s.rtol, "relative accuracy of propagated solutions");
    sub->add_option("--atol", s.atol, "absolute local error per step");
    sub->add_option("--renorm-threshold", s.renorm_threshold, "magnitude triggering a rescale");
    sub->add_option("--max-steps", s.max_steps, "step budget per integration");
    sub->add_option("--taylor-order", s.taylor_order, "Taylor series order");
}

void add_output(CLI::App* sub, RunConfig& rc) {
    sub->add_option("--out", rc.output_path, "output file (default stdout)");
    sub->add_option("--format", rc.output_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

// key=value lines, '#' comments. Keys name long options of the chosen
// subcommand without the leading dashes.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError(path + ":" + std::to_string(lineno) + ": expected key=value");
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

// Appends file entries whose option does not already appear among the flags.
std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::optional<std::string> path;
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw ValidationError("--config requires a path");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            kept.push_back(args[i]);
        }
    }
    if (!path) return kept;
    auto given = [&](const std::string& flag) {
        for (const auto& a : kept)
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        return false;
    };
    for (const auto& [key, value] : read_config_file(*path)) {
        const std::string flag = "--" + key;
        if (given(flag)) continue;
        if (value == "true") {
            kept.push_back(flag);
        } else if (value != "false") {
            kept.push_back(flag + "=" + value);
        }
    }
    return kept;
}

OperatorParams params_of(const RunConfig& rc) { return OperatorParams(rc.k, rc.l); }

void print_line(std::ostream& out, const std::string& key, const std::string& value) {
    out << key << '=' << value << '\n';
}

// Writes to --out when given, otherwise to stdout.
template <class Writer>
void emit(const RunConfig& rc, std::ostream& out, Writer&& write) {
    if (rc.output_path.empty()) {
        write(out);
        return;
    }
    std::ofstream f(rc.output_path, std::ios::binary);
    if (!f) throw ValidationError("cannot open output file '" + rc.output_path + "'");
    write(f);
    if (!f) throw ValidationError("failed writing '" + rc.output_path + "'");
}

void write_records(const RunConfig& rc, std::ostream& out, const std::vector<EigenvalueRecord>& recs) {
    emit(rc, out, [&](std::ostream& o) {
        if (rc.output_format == "json")
            write_records_json(o, recs);
        else
            write_records_csv(o, recs);
    });
}

int cmd_classify(const RunConfig& rc, std::ostream& out) {
    const OperatorParams p = params_of(rc);
    const CaseClass c = classify_case(p);
    const StratumReport rep = stratify(p);
    out << to_string(c) << "; " << rep.note << "; " << to_string(rep.verdict) << '\n';
    for (const auto& s : rep.strata)
        out << s.name << ' ' << s.description << " codimension=" << s.codimension
            << (s.symplectic ? " symplectic" : " not-symplectic") << '\n';
    return kExitOk;
}

int cmd_predict(const RunConfig& rc, std::ostream& out) {
    const OperatorParams p = params_of(rc);
    const DerivedParams d = derive_params(p);
    const CaseClass c = classify_case(p);
    const Complex xp = predict_xi_paper(d, c, rc.M);
    const Complex xs = predict_xi_solved(d, c, rc.M);
    print_line(out, "case", to_string(c));
    print_line(out, "M", std::to_string(rc.M));
    print_line(out, "xi_paper", format_complex(xp));
    print_line(out, "xi_solved", format_complex(xs));
    print_line(out, "zeta_paper", format_complex(xi_to_zeta(xp, d)));
    print_line(out, "zeta_solved", format_complex(xi_to_zeta(xs, d)));
    print_line(out, "zeta_asymptotic", format_complex(predict_zeta(p, rc.M)));
    return kExitOk;
}

int cmd_refine(const RunConfig& rc, std::ostream& out) {
    const OperatorParams p = params_of(rc);
    if (rc.M < 1) throw ValidationError("--M must be a positive integer");
    const Complex seed = rc.seed.empty() ? solved_seed(p, rc.M) : parse_complex(rc.seed);
    const EigenvalueRecord rec = refine(seed, p, rc.shooting, rc.tol, rc.M);
    write_records(rc, out, {rec});
    return rec.certified() ? kExitOk : kExitNumeric;
}

int cmd_scan(const RunConfig& rc, std::ostream& out) {
    const OperatorParams p = params_of(rc);
    ScanOptions opts;
    opts.tol = rc.tol;
    opts.winding_check = !rc.no_winding;
    opts.winding_samples = rc.samples;
    opts.threads = rc.threads;
    const auto recs = scan(p, rc.M_from, rc.M_to, rc.shooting, opts);
    write_records(rc, out, recs);
    return kExitOk;
}

int cmd_winding(const RunConfig& rc, std::ostream& out) {
    const OperatorParams p = params_of(rc);
    const WindingReport w = winding_number(parse_complex(rc.center), rc.radius, p, rc.shooting, rc.samples);
    print_line(out, "center", format_complex(w.center));
    print_line(out, "radius", format_number(w.radius));
    print_line(out, "samples", std::to_string(w.samples));
    print_line(out, "winding", std::to_string(w.winding));
    print_line(out, "min_abs_on_contour", format_number(w.min_abs_on_contour));
    return kExitOk;
}

int cmd_check_watson(const RunConfig& rc, std::ostream& out) {
    if (rc.T.empty()) throw ValidationError("--T needs at least one value");
    out << "#schema=" << kSchemaVersion << '\n';
    out << "quantity,alpha,T,quad_re,quad_im,asym_re,asym_im,rel_err,T_times_rel_err,abs_error_estimate\n";
    auto row = [&](const char* name, double T, const QuadratureResult& q, Complex a) {
        const double rel = std::abs(q.value / a - 1.0);
        out << name << ',' << format_number(rc.alpha) << ',' << format_number(T) << ','
            << format_complex(q.value) << ',' << format_complex(a) << ',' << format_number(rel) << ','
            << format_number(T * rel) << ',' << format_number(q.abs_error_estimate) << '\n';
    };
    for (double T : rc.T) {
        row("I", T, eval_I(T, rc.alpha, rc.quad_tol), watson_I(T, rc.alpha));
        row("phi_plus", T, eval_phi(T, rc.alpha, Sign::Plus, rc.quad_tol), watson_phi(T, rc.alpha, Sign::Plus));
        row("phi_minus", T, eval_phi(T, rc.alpha, Sign::Minus, rc.quad_tol), watson_phi(T, rc.alpha, Sign::Minus));
    }
    return kExitOk;
}

int cmd_profile(const RunConfig& rc, std::ostream& out) {
    const OperatorParams p = params_of(rc);
    const auto samples = eigenfunction_profile(parse_complex(rc.zeta), p, rc.shooting, rc.profile_samples);
    emit(rc, out, [&](std::ostream& o) { write_profile_csv(o, samples); });
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig rc;
    CLI::App app{"Eigenvalue solver for -f'' + (x^l - zeta x^k)^2 f = 0", "ahspec"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "expand help for all subcommands");

    auto* classify = app.add_subcommand("classify", "case class and Poisson strata");
    add_params(classify, rc);

    auto* predict = app.add_subcommand("predict", "asymptotic xi_M and zeta_M from both predictors");
    add_params(predict, rc);
    predict->add_option("--M", rc.M, "branch index")->required();

    auto* refine_cmd = app.add_subcommand("refine", "Newton refinement of one eigenvalue");
    add_params(refine_cmd, rc);
    refine_cmd->add_option("--M", rc.M, "branch index")->required();
    refine_cmd->add_option("--seed", rc.seed, "starting zeta as re,im (default: solved predictor)");
    refine_cmd->add_option("--tol", rc.tol, "relative Newton step tolerance");
    add_shooting(refine_cmd, rc);
    add_output(refine_cmd, rc);

    auto* scan_cmd = app.add_subcommand("scan", "refine and certify a range of indices");
    add_params(scan_cmd, rc);
    scan_cmd->add_option("--from", rc.M_from, "first index")->required();
    scan_cmd->add_option("--to", rc.M_to, "last index")->required();
    scan_cmd->add_option("--tol", rc.tol, "relative Newton step tolerance");
    scan_cmd->add_option("--samples", rc.samples, "initial winding contour samples");
    scan_cmd->add_flag("--no-winding", rc.no_winding, "skip the contour check");
    scan_cmd->add_option("--threads", rc.threads, "worker threads (0 = hardware concurrency)");
    add_shooting(scan_cmd, rc);
    add_output(scan_cmd, rc);

    auto* winding_cmd = app.add_subcommand("winding", "winding number of D around a circle");
    add_params(winding_cmd, rc);
    winding_cmd->add_option("--center", rc.center, "circle center as re,im")->required();
    winding_cmd->add_option("--radius", rc.radius, "circle radius")->required();
    winding_cmd->add_option("--samples", rc.samples, "initial contour samples");
    add_shooting(winding_cmd, rc);

    auto* watson_cmd = app.add_subcommand("check-watson", "quadrature against leading asymptotics");
    watson_cmd->add_option("--alpha", rc.alpha, "exponent in (0,1)")->required();
    watson_cmd->add_option("--T", rc.T, "comma-separated T values")->required()->delimiter(',');
    watson_cmd->add_option("--tol", rc.quad_tol, "absolute quadrature tolerance");

    auto* profile_cmd = app.add_subcommand("profile", "eigenfunction samples at an eigenvalue");
    add_params(profile_cmd, rc);
    profile_cmd->add_option("--zeta", rc.zeta, "eigenvalue as re,im")->required();
    profile_cmd->add_option("--samples", rc.profile_samples, "number of x samples");
    profile_cmd->add_option("--out", rc.output_path, "output file (default stdout)");
    add_shooting(profile_cmd, rc);

    auto handler = set_warning_handler([&err](std::string_view msg) { err << "warning: " << msg << '\n'; });
    struct Restore {
        WarningHandler h;
        ~Restore() { set_warning_handler(std::move(h)); }
    } restore{std::move(handler)};

    try {
        std::vector<std::string> merged = merge_config(args);
        std::reverse(merged.begin(), merged.end());
        app.parse(merged);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    try {
        if (classify->parsed()) return cmd_classify(rc, out);
        if (predict->parsed()) return cmd_predict(rc, out);
        if (refine_cmd->parsed()) return cmd_refine(rc, out);
        if (scan_cmd->parsed()) return cmd_scan(rc, out);
        if (winding_cmd->parsed()) return cmd_winding(rc, out);
        if (watson_cmd->parsed()) return cmd_check_watson(rc, out);
        if (profile_cmd->parsed()) return cmd_profile(rc, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    }
    return kExitValidation;
}

}  // namespace ahspec
