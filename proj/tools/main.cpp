// curvn: curve-number and photon-count computations from JSON spec files.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "curvn/conformal.hpp"
#include "curvn/json_io.hpp"
#include "curvn/optimize.hpp"
#include "curvn/photon.hpp"
#include "curvn/quadrature.hpp"
#include "curvn/svg.hpp"

namespace {

using namespace curvn;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitIo = 4;

class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot read \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write \"" + path + "\"");
    out << content;
    if (!out) throw io_error("write to \"" + path + "\" failed");
}

struct CommonOptions {
    double tol = 0.0;  // 0 = module default
    int max_grid = 4096;
    double window = 8.0;
    std::string out_path;
    std::string format = "text";
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--tol", opts.tol, "tolerance override");
    cmd->add_option("--max-grid", opts.max_grid, "largest 1-D quadrature grid");
    cmd->add_option("--window", opts.window, "initial open-curve window");
    cmd->add_option("--out", opts.out_path, "machine-readable report path");
    cmd->add_option("--format", opts.format, "text, json, csv or svg")
        ->check(CLI::IsMember({"text", "json", "csv", "svg"}));
}

void emit_report(const nlohmann::ordered_json& report, const CommonOptions& opts) {
    if (!opts.out_path.empty()) write_file(opts.out_path, report.dump(2) + "\n");
    if (opts.format == "json") std::cout << report.dump(2) << "\n";
}

Curve load_curve(const std::string& path) {
    const ParsedDocument doc = parse_spec(read_file(path));
    if (const Curve* c = std::get_if<Curve>(&doc)) return *c;
    throw schema_error("kind", "expected a curve document");
}

Curve curve_from_embedded(const nlohmann::json& doc) {
    if (doc.is_null()) throw schema_error("input", "missing curve document");
    return parse_curve(doc);
}

WorldLine load_worldline(const std::string& path) {
    const ParsedDocument doc = parse_spec(read_file(path));
    if (const WorldLine* w = std::get_if<WorldLine>(&doc)) return *w;
    throw schema_error("kind", "expected a worldline document");
}

// ---------------------------------------------------------------------------

int run_eval(const Curve& curve, const CommonOptions& opts,
             const nlohmann::json& input_doc) {
    const double tol = opts.tol > 0.0 ? opts.tol : 1e-8;
    const QuadratureResult r = curve_number_closed(curve, tol, opts.max_grid);
    std::printf("n            = %.12f\n", r.value);
    std::printf("n / 2        = %.12f\n", 0.5 * r.value);
    std::printf("error est.   = %.3e\n", r.error_estimate);
    std::printf("grid         = %d x %d\n", r.grid_size, r.grid_size);
    std::printf("converged    = %s\n", r.converged ? "true" : "false");

    nlohmann::ordered_json report;
    report["command"] = "eval";
    if (!input_doc.is_null()) report["input"] = input_doc;
    report["result"] = quadrature_to_json(r);
    emit_report(report, opts);
    return r.converged ? kExitOk : kExitNoConvergence;
}

int run_eval_open(const Curve& curve, const CommonOptions& opts,
                  const nlohmann::json& input_doc) {
    const double tol = opts.tol > 0.0 ? opts.tol : 1e-6;
    TruncationPolicy policy;
    policy.initial_window = opts.window;
    const QuadratureResult r = curve_number_open(curve, tol, policy, opts.max_grid);
    std::printf("n            = %.12f\n", r.value);
    std::printf("error est.   = %.3e\n", r.error_estimate);
    std::printf("window       = [-%g, %g], tail est. %.3e\n", r.window, r.window,
                r.tail_estimate);
    std::printf("grid         = %d\n", r.grid_size);
    std::printf("converged    = %s\n", r.converged ? "true" : "false");

    nlohmann::ordered_json report;
    report["command"] = "eval-open";
    if (!input_doc.is_null()) report["input"] = input_doc;
    report["result"] = quadrature_to_json(r);
    emit_report(report, opts);
    return r.converged ? kExitOk : kExitNoConvergence;
}

int run_table(const CommonOptions& opts) {
    const double tol = opts.tol > 0.0 ? opts.tol : 1e-8;
    struct Row { double ecc; double reference; };
    const Row rows[] = {{0.0, 9.83}, {0.5, 9.93}, {0.7, 10.4},
                        {0.9, 13.4}, {0.95, 17.2}, {0.99, 35.2}};
    bool all_converged = true;
    nlohmann::ordered_json jrows = nlohmann::ordered_json::array();
    std::printf("%-6s %-12s %-10s %s\n", "ecc", "n/2", "reference", "rel. deviation");
    for (const Row& row : rows) {
        const QuadratureResult r =
            curve_number_closed(Curve::ellipse(1.0, row.ecc), tol, opts.max_grid);
        all_converged = all_converged && r.converged;
        const double half = 0.5 * r.value;
        const double dev = (half - row.reference) / row.reference;
        std::printf("%-6.2f %-12.6f %-10.2f %+.4f\n", row.ecc, half, row.reference, dev);
        nlohmann::ordered_json jr;
        jr["ecc"] = row.ecc;
        jr["n_half"] = half;
        jr["reference"] = row.reference;
        jr["relative_deviation"] = dev;
        jr["converged"] = r.converged;
        jrows.push_back(jr);
    }
    nlohmann::ordered_json report;
    report["command"] = "table";
    report["rows"] = jrows;
    emit_report(report, opts);
    return all_converged ? kExitOk : kExitNoConvergence;
}

int run_invert(const Curve& curve, Vec center, double radius, const CommonOptions& opts,
               const nlohmann::json& input_doc) {
    const double tol = opts.tol > 0.0 ? opts.tol : 1e-6;
    const InversionInvarianceReport r =
        check_inversion_invariance(curve, {center, radius}, tol);
    std::printf("n (source)   = %.12f\n", r.n_source);
    std::printf("n (image)    = %.12f\n", r.n_image);
    std::printf("rel. diff    = %.3e (tol %g)\n", r.relative_difference, tol);
    std::printf("invariant    = %s\n", r.passed ? "yes" : "NO");

    nlohmann::ordered_json report;
    report["command"] = "invert";
    if (!input_doc.is_null()) report["input"] = input_doc;
    report["n_source"] = r.n_source;
    report["n_image"] = r.n_image;
    report["relative_difference"] = r.relative_difference;
    report["passed"] = r.passed;
    emit_report(report, opts);
    if (!r.source_quadrature.converged || !r.image_quadrature.converged)
        return kExitNoConvergence;
    return kExitOk;
}

int run_anomaly(const Curve& curve, Vec center, double radius, const CommonOptions& opts,
                const nlohmann::json& input_doc) {
    const double tol = opts.tol > 0.0 ? opts.tol : 1e-3;
    const AnomalyReport r = anomaly_check(curve, {center, radius}, tol);
    std::printf("n (closed)   = %.12f\n", r.n_closed);
    std::printf("n (open)     = %.12f\n", r.n_open);
    std::printf("difference   = %.12f\n", r.difference);
    std::printf("2 pi^2       = %.12f\n", kTwoPiSquared);
    std::printf("deviation    = %+.3e (tol %g)\n", r.deviation, tol);
    std::printf("anomaly ok   = %s\n", r.passed ? "yes" : "NO");

    nlohmann::ordered_json report;
    report["command"] = "anomaly";
    if (!input_doc.is_null()) report["input"] = input_doc;
    report["n_closed"] = r.n_closed;
    report["n_open_image"] = r.n_open;
    report["difference"] = r.difference;
    report["deviation_from_two_pi_squared"] = r.deviation;
    report["passed"] = r.passed;
    emit_report(report, opts);
    if (!r.closed_quadrature.converged || !r.open_quadrature.converged)
        return kExitNoConvergence;
    return kExitOk;
}

int run_photon(const WorldLine& w, bool with_oracle, const CommonOptions& opts,
               const nlohmann::json& input_doc) {
    const double tol = opts.tol > 0.0 ? opts.tol : 1e-4;
    const PhotonCount n = photon_number(w, tol, opts.max_grid);
    std::printf("n            = %.12e\n", n.value);
    std::printf("grid         = %d, window pad = %g\n", n.grid_size, n.window_pad);
    std::printf("converged    = %s\n", n.converged ? "true" : "false");

    nlohmann::ordered_json report;
    report["command"] = "photon";
    if (!input_doc.is_null()) report["input"] = input_doc;
    report["n"] = n.value;
    report["error_estimate"] = n.error_estimate;
    report["grid"] = n.grid_size;
    report["window_pad"] = n.window_pad;
    report["converged"] = n.converged;

    if (with_oracle) {
        const PhotonCount spec = spectral_photon_number(w);
        const double rel = std::abs(n.value - spec.value) / std::max(spec.value, 1e-300);
        std::printf("spectral n   = %.12e (rel. diff %.3e)\n", spec.value, rel);
        report["spectral_n"] = spec.value;
        report["relative_difference"] = rel;
    }
    if (opts.format == "csv") {
        const Spectrum spec = radiation_spectrum(w);
        std::ostringstream csv;
        csv << "omega,dE_domega,dN_domega\n";
        char line[128];
        for (std::size_t i = 0; i < spec.omega.size(); ++i) {
            std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", spec.omega[i],
                          spec.energy_density[i], spec.number_density[i]);
            csv << line;
        }
        if (!opts.out_path.empty())
            write_file(opts.out_path, csv.str());
        else
            std::cout << csv.str();
        return n.converged ? kExitOk : kExitNoConvergence;
    }
    emit_report(report, opts);
    return n.converged ? kExitOk : kExitNoConvergence;
}

int run_boost(const WorldLine& w, Vec beta, const CommonOptions& opts,
              const nlohmann::json& input_doc) {
    const double tol = opts.tol > 0.0 ? opts.tol : 1e-4;
    const PhotonCount before = photon_number(w, tol, opts.max_grid);
    const PhotonCount after = photon_number(w.boosted(beta), tol, opts.max_grid);
    const double rel =
        std::abs(after.value - before.value) / std::max(std::abs(before.value), 1e-300);
    std::printf("n            = %.12e\n", before.value);
    std::printf("n (boosted)  = %.12e\n", after.value);
    std::printf("rel. diff    = %.3e\n", rel);

    nlohmann::ordered_json report;
    report["command"] = "boost";
    if (!input_doc.is_null()) report["input"] = input_doc;
    report["beta"] = {beta.x, beta.y, beta.z};
    report["n"] = before.value;
    report["n_boosted"] = after.value;
    report["relative_difference"] = rel;
    emit_report(report, opts);
    return (before.converged && after.converged) ? kExitOk : kExitNoConvergence;
}

int run_minimize(const Curve& curve, int max_iterations, double gradient_tol,
                 const std::string& trace_path, const CommonOptions& opts) {
    const auto loop = curve.as_fourier();
    if (!loop) throw schema_error("kind", "minimize expects a fourier-loop document");
    OptimizeOptions options;
    if (max_iterations > 0) options.max_iterations = max_iterations;
    if (gradient_tol > 0.0) options.gradient_tol = gradient_tol;
    if (opts.tol > 0.0) options.quadrature_tol = opts.tol;

    const OptimizeResult result = minimize(*loop, options);
    std::printf("start n      = %.12f\n", result.trace.iterates.front().n);
    std::printf("final n      = %.12f\n", result.n);
    std::printf("2 pi^2       = %.12f\n", kTwoPiSquared);
    std::printf("iterations   = %zu\n", result.trace.iterates.size());
    std::printf("termination  = %s\n", result.trace.termination.c_str());
    if (result.trace.conjecture_violation)
        std::printf("CONJECTURE VIOLATION: n < 2 pi^2 - 1e-3\n");

    if (!trace_path.empty()) {
        std::ostringstream csv;
        csv << "iteration,n,gradient_norm\n";
        char line[96];
        for (std::size_t i = 0; i < result.trace.iterates.size(); ++i) {
            std::snprintf(line, sizeof line, "%zu,%.17g,%.17g\n", i,
                          result.trace.iterates[i].n,
                          result.trace.iterates[i].gradient_norm);
            csv << line;
        }
        write_file(trace_path, csv.str());
    }
    if (!opts.out_path.empty()) {
        nlohmann::ordered_json report;
        report["command"] = "minimize";
        report["final_n"] = result.n;
        report["iterations"] = result.trace.iterates.size();
        report["termination"] = result.trace.termination;
        report["conjecture_violation"] = result.trace.conjecture_violation;
        report["final_loop"] = serialize_curve(Curve::fourier(result.loop));
        write_file(opts.out_path, report.dump(2) + "\n");
    }
    return kExitOk;
}

int run_export(const Curve& curve, const CommonOptions& opts,
               int csv_grid) {
    if (opts.format == "csv") {
        std::ostringstream csv;
        dump_kernel_grid_csv(curve, csv_grid, csv);
        if (!opts.out_path.empty())
            write_file(opts.out_path, csv.str());
        else
            std::cout << csv.str();
        return kExitOk;
    }
    // SVG with the computed curve number in the caption
    double n = 0.0;
    bool converged = false;
    if (curve.closed()) {
        const QuadratureResult r =
            curve_number_closed(curve, opts.tol > 0.0 ? opts.tol : 1e-8, opts.max_grid);
        n = r.value;
        converged = r.converged;
    } else {
        TruncationPolicy policy;
        policy.initial_window = opts.window;
        const QuadratureResult r =
            curve_number_open(curve, opts.tol > 0.0 ? opts.tol : 1e-6, policy, opts.max_grid);
        n = r.value;
        converged = r.converged;
    }
    char caption[64];
    std::snprintf(caption, sizeof caption, "n = %.6g", n);
    SvgOptions svg;
    svg.caption = caption;
    svg.open_window = opts.window;
    std::ostringstream out;
    export_plot(curve, svg, out);
    if (!opts.out_path.empty())
        write_file(opts.out_path, out.str());
    else
        std::cout << out.str();
    return converged ? kExitOk : kExitNoConvergence;
}

int dispatch_job(const JobSpec& job);

int run_with_exit_codes(const std::function<int()>& body) {
    try {
        return body();
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const exceptional_inversion& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const schema_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ir_divergence_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

int dispatch_job(const JobSpec& job) {
    CommonOptions opts;
    if (job.tol) opts.tol = *job.tol;
    if (job.max_grid) opts.max_grid = *job.max_grid;
    if (job.window) opts.window = *job.window;
    opts.out_path = job.out_path;
    opts.format = job.format;

    if (job.command == "table") return run_table(opts);
    if (job.command == "eval")
        return run_eval(curve_from_embedded(job.input), opts, job.input);
    if (job.command == "eval-open")
        return run_eval_open(curve_from_embedded(job.input), opts, job.input);
    if (job.command == "invert" || job.command == "anomaly") {
        if (!job.center) throw schema_error("center", "required for this command");
        const Curve curve = curve_from_embedded(job.input);
        return job.command == "invert"
                   ? run_invert(curve, *job.center, job.radius, opts, job.input)
                   : run_anomaly(curve, *job.center, job.radius, opts, job.input);
    }
    if (job.command == "photon")
        return run_photon(parse_worldline(job.input), true, opts, job.input);
    if (job.command == "boost") {
        if (!job.beta) throw schema_error("beta", "required for this command");
        return run_boost(parse_worldline(job.input), *job.beta, opts, job.input);
    }
    if (job.command == "minimize")
        return run_minimize(curve_from_embedded(job.input), 0, 0.0, "", opts);
    if (job.command == "export")
        return run_export(curve_from_embedded(job.input), opts, 64);
    throw schema_error("command", "unknown command \"" + job.command + "\"");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"curve numbers, photon counts, inversions and shape optimization"};
    app.require_subcommand(1);

    std::string input_path;
    std::vector<double> center_arg, beta_arg;
    double radius = 1.0;
    int max_iterations = 0, csv_grid = 64;
    double gradient_tol = 0.0;
    std::string trace_path;
    bool with_oracle = false;

    CommonOptions opts[9];

    CLI::App* eval = app.add_subcommand("eval", "curve number of a closed curve");
    eval->add_option("input", input_path, "curve JSON document")->required();
    add_common(eval, opts[0]);

    CLI::App* eval_open = app.add_subcommand("eval-open", "curve number of an open curve");
    eval_open->add_option("input", input_path, "curve JSON document")->required();
    add_common(eval_open, opts[1]);

    CLI::App* table = app.add_subcommand("table", "eccentricity table for ellipses");
    add_common(table, opts[2]);

    CLI::App* invert = app.add_subcommand("invert", "inversion-invariance check");
    invert->add_option("input", input_path, "curve JSON document")->required();
    invert->add_option("--center", center_arg, "inversion center")->expected(2, 3)->required();
    invert->add_option("--radius", radius, "inversion radius");
    add_common(invert, opts[3]);

    CLI::App* anomaly = app.add_subcommand("anomaly", "exceptional-inversion 2 pi^2 check");
    anomaly->add_option("input", input_path, "curve JSON document")->required();
    anomaly->add_option("--center", center_arg, "inversion center")->expected(2, 3)->required();
    anomaly->add_option("--radius", radius, "inversion radius");
    add_common(anomaly, opts[4]);

    CLI::App* photon = app.add_subcommand("photon", "photon number of a worldline");
    photon->add_option("input", input_path, "worldline JSON document")->required();
    photon->add_flag("--oracle", with_oracle, "also run the spectral oracle");
    add_common(photon, opts[5]);

    CLI::App* boost_cmd = app.add_subcommand("boost", "photon number before/after a boost");
    boost_cmd->add_option("input", input_path, "worldline JSON document")->required();
    boost_cmd->add_option("--beta", beta_arg, "boost velocity")->expected(3)->required();
    add_common(boost_cmd, opts[6]);

    CLI::App* minimize_cmd = app.add_subcommand("minimize", "descend n over fourier loops");
    minimize_cmd->add_option("input", input_path, "fourier-loop JSON document")->required();
    minimize_cmd->add_option("--max-iter", max_iterations, "iteration cap");
    minimize_cmd->add_option("--gtol", gradient_tol, "gradient-norm stop");
    minimize_cmd->add_option("--trace-out", trace_path, "iteration trace CSV path");
    add_common(minimize_cmd, opts[7]);

    CLI::App* export_cmd = app.add_subcommand("export", "SVG plot or kernel-grid CSV");
    export_cmd->add_option("input", input_path, "curve JSON document")->required();
    export_cmd->add_option("--grid", csv_grid, "kernel CSV grid size");
    add_common(export_cmd, opts[8]);

    CLI::App* run_cmd = app.add_subcommand("run", "execute a job JSON document");
    run_cmd->add_option("input", input_path, "job JSON document")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    auto vec_of = [](const std::vector<double>& v) {
        Vec out;
        if (!v.empty()) out.x = v[0];
        if (v.size() > 1) out.y = v[1];
        if (v.size() > 2) out.z = v[2];
        return out;
    };

    return run_with_exit_codes([&]() -> int {
        if (eval->parsed())
            return run_eval(load_curve(input_path), opts[0],
                            nlohmann::json::parse(read_file(input_path)));
        if (eval_open->parsed())
            return run_eval_open(load_curve(input_path), opts[1],
                                 nlohmann::json::parse(read_file(input_path)));
        if (table->parsed()) return run_table(opts[2]);
        if (invert->parsed())
            return run_invert(load_curve(input_path), vec_of(center_arg), radius, opts[3],
                              nlohmann::json::parse(read_file(input_path)));
        if (anomaly->parsed())
            return run_anomaly(load_curve(input_path), vec_of(center_arg), radius, opts[4],
                               nlohmann::json::parse(read_file(input_path)));
        if (photon->parsed())
            return run_photon(load_worldline(input_path), with_oracle, opts[5],
                              nlohmann::json::parse(read_file(input_path)));
        if (boost_cmd->parsed())
            return run_boost(load_worldline(input_path), vec_of(beta_arg), opts[6],
                             nlohmann::json::parse(read_file(input_path)));
        if (minimize_cmd->parsed())
            return run_minimize(load_curve(input_path), max_iterations, gradient_tol,
                                trace_path, opts[7]);
        if (export_cmd->parsed()) return run_export(load_curve(input_path), opts[8], csv_grid);
        if (run_cmd->parsed()) {
            const ParsedDocument doc = parse_spec(read_file(input_path));
            if (const JobSpec* job = std::get_if<JobSpec>(&doc)) return dispatch_job(*job);
            throw schema_error("command", "expected a job document");
        }
        return kExitValidation;
    });
}
