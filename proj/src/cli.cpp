#include <sponge/cli.hpp>

#include <sponge/dimension.hpp>
#include <sponge/estimate.hpp>
#include <sponge/report.hpp>
#include <sponge/structure.hpp>
#include <sponge/subsystem.hpp>
#include <sponge/svg.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace sponge {

namespace {

struct OptionDef {
    std::string names;  // CLI11 name list, e.g. "-o,--output"
    std::string key;
    std::string help;
    bool is_switch = false;
};

const std::map<std::string, std::vector<OptionDef>>& subcommand_options() {
    static const std::map<std::string, std::vector<OptionDef>> table = {
        {"validate", {{"--measure", "measure", "weights document"}}},
        {"check", {{"--measure", "measure", "weights document"}}},
        {"dims", {{"--measure", "measure", "weights document (default uniform)"}}},
        {"dyndim",
         {{"--restarts", "restarts", "optimizer restarts (16)"},
          {"--tol", "tol", "convergence tolerance (1e-10)"},
          {"--seed", "seed", "master seed (0)"}}},
        {"subsystem",
         {{"--measure", "measure", "weights document (default uniform)"},
          {"--eps", "eps", "typicality slack"},
          {"-N", "N", "word length"},
          {"--tau-max-len", "tau-max-len", "longest interior word searched (8)"},
          {"--cap", "cap", "enumeration cap (10000000)"},
          {"--tau", "tau", "interior word as comma-separated digit indices"}}},
        {"converge",
         {{"--measure", "measure", "weights document (default uniform)"},
          {"--eps", "eps", "comma-separated slack schedule"},
          {"-N", "N", "comma-separated ascending word lengths"},
          {"--tau-max-len", "tau-max-len", "longest interior word searched (8)"},
          {"--cap", "cap", "enumeration cap (10000000)"}}},
        {"estimate",
         {{"--points", "points", "sample size (100000)"},
          {"--depth", "depth", "cylinder depth, 0 picks automatically (20)"},
          {"--seed", "seed", "sampling seed (1)"},
          {"--beta", "beta", "beta exponent range lo:hi (2:7)"},
          {"--rho", "rho", "rho exponent range lo:hi (1:9)"},
          {"--centers", "centers", "sampled ball centres (256)"},
          {"--csv", "csv", "write the count table to this file"},
          {"--witness", "witness", "add witness matrices at each rho", true},
          {"--flatness", "flatness", "add a flatness certificate", true}}},
        {"render",
         {{"-o,--output", "output", "SVG file to write"}, {"--size", "size", "panel size in pixels (600)"}}},
    };
    return table;
}

const char* subcommand_help(const std::string& name) {
    if (name == "validate") return "parse a template and echo its canonical form";
    if (name == "check") return "classification, order, irreducibility and diffuseness";
    if (name == "dims") return "Assouad formula, Ledrappier-Young and McMullen dimensions";
    if (name == "dyndim") return "dynamical dimension by multistart optimization";
    if (name == "subsystem") return "build the subsystem for one (eps, N)";
    if (name == "converge") return "subsystem bounds over an (eps, N) schedule";
    if (name == "estimate") return "empirical Assouad estimates from sampled points";
    return "draw the template as SVG";
}

[[noreturn]] void bad_flag(const std::string& key, const std::string& value, const std::string& what) {
    throw SpongeError(ErrorCode::InvalidArgument, "--" + key + " '" + value + "': " + what);
}

class Flags {
public:
    explicit Flags(const std::map<std::string, std::string>& raw) : raw_(raw) {}

    bool has(const std::string& key) const { return raw_.count(key) > 0; }
    bool on(const std::string& key) const { return has(key) && raw_.at(key) == "true"; }

    std::string text(const std::string& key, const std::string& fallback = {}) const {
        return has(key) ? raw_.at(key) : fallback;
    }

    std::string required(const std::string& key) const {
        if (!has(key)) throw SpongeError(ErrorCode::InvalidArgument, "missing required flag --" + key);
        return raw_.at(key);
    }

    long long integer(const std::string& key, long long fallback) const {
        return has(key) ? to_integer(key, raw_.at(key)) : fallback;
    }

    double real(const std::string& key, double fallback) const {
        return has(key) ? to_real(key, raw_.at(key)) : fallback;
    }

    std::vector<double> reals(const std::string& key) const {
        std::vector<double> out;
        for (const auto& part : split(required(key), ',')) out.push_back(to_real(key, part));
        return out;
    }

    std::vector<long long> integers(const std::string& key) const {
        std::vector<long long> out;
        for (const auto& part : split(required(key), ',')) out.push_back(to_integer(key, part));
        return out;
    }

    /// "lo:hi" inclusive, or a single value.
    std::vector<int> range(const std::string& key, int lo, int hi) const {
        if (has(key)) {
            const auto parts = split(raw_.at(key), ':');
            if (parts.size() == 1) {
                lo = hi = static_cast<int>(to_integer(key, parts[0]));
            } else if (parts.size() == 2) {
                lo = static_cast<int>(to_integer(key, parts[0]));
                hi = static_cast<int>(to_integer(key, parts[1]));
            } else {
                bad_flag(key, raw_.at(key), "expected lo:hi");
            }
            if (lo > hi) bad_flag(key, raw_.at(key), "empty range");
        }
        std::vector<int> out;
        for (int k = lo; k <= hi; ++k) out.push_back(k);
        return out;
    }

private:
    static std::vector<std::string> split(const std::string& s, char sep) {
        std::vector<std::string> out;
        std::string part;
        std::istringstream in(s);
        while (std::getline(in, part, sep)) out.push_back(part);
        if (!s.empty() && s.back() == sep) out.emplace_back();
        return out;
    }

    static long long to_integer(const std::string& key, const std::string& v) {
        try {
            std::size_t used = 0;
            long long x = std::stoll(v, &used);
            if (used == v.size()) return x;
        } catch (const std::exception&) {
        }
        bad_flag(key, v, "expected an integer");
    }

    static double to_real(const std::string& key, const std::string& v) {
        try {
            std::size_t used = 0;
            double x = std::stod(v, &used);
            if (used == v.size() && std::isfinite(x)) return x;
        } catch (const std::exception&) {
        }
        bad_flag(key, v, "expected a finite number");
    }

    const std::map<std::string, std::string>& raw_;
};

std::string read_file(const std::string& path) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
        throw SpongeError(ErrorCode::FileNotFound, "no such file: " + path);
    }
    std::ifstream f(path, std::ios::binary);
    if (!f) throw SpongeError(ErrorCode::FileNotFound, "cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return buf.str();
}

// temp file then rename, so readers never see half a file
void write_file(const std::string& path, const std::string& text) {
    std::filesystem::path tmp(path);
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f || !(f << text) || !f.flush()) throw SpongeError(ErrorCode::InvalidArgument, "cannot write " + path);
    }
    std::filesystem::rename(tmp, path);
}

BernoulliWeights weights_or_uniform(const Flags& flags, const SpongeTemplate& t) {
    if (flags.has("measure")) return parse_weights(read_file(flags.text("measure")), t);
    return BernoulliWeights::uniform(t.size());
}

SubsystemOptions subsystem_options(const Flags& flags, const SpongeTemplate& t) {
    SubsystemOptions opt;
    opt.tau_max_len = static_cast<int>(flags.integer("tau-max-len", 8));
    const long long cap = flags.integer("cap", 10'000'000);
    if (cap <= 0) bad_flag("cap", flags.text("cap"), "must be positive");
    opt.cap = static_cast<std::uint64_t>(cap);
    if (flags.has("tau")) {
        Word tau;
        for (long long a : flags.integers("tau")) {
            if (a < 0 || static_cast<std::size_t>(a) >= t.size()) bad_flag("tau", flags.text("tau"), "digit out of range");
            tau.push_back(static_cast<std::size_t>(a));
        }
        opt.tau = std::move(tau);
    }
    return opt;
}

std::optional<double> mcmullen_if_carpet(const SpongeTemplate& t) {
    if (t.dimension() != 2) return std::nullopt;
    try {
        return mcmullen_dimension(t);
    } catch (const SpongeError& e) {
        if (e.code() != ErrorCode::NotSierpinskiCarpet) throw;
        return std::nullopt;
    }
}

Json validate_cmd(const SpongeTemplate& t, const Flags& flags) {
    ValidateReport r;
    r.dimension = t.dimension();
    r.digits = t.size();
    r.exact = t.is_exact();
    r.canonical = template_to_json(t);
    if (flags.has("measure")) {
        std::vector<std::string> w;
        for (const auto& n : weights_or_uniform(flags, t).numbers()) w.push_back(n.to_string());
        r.weights = std::move(w);
    }
    return r;
}

Json check_cmd(const SpongeTemplate& t, const Flags& flags) {
    CheckReport r;
    r.classification = classify(t);
    r.order = partial_order(t);
    r.irreducibility = irreducibility(t);
    r.diffuseness = decide_diffuseness(t);
    if (r.classification.lg_sigma) r.separation = separation_constant(t, *r.classification.lg_sigma);
    if (flags.has("measure")) r.measure = measure_profile(t, weights_or_uniform(flags, t));
    return r;
}

Json dims_cmd(const SpongeTemplate& t, const Flags& flags) {
    DimensionReport r;
    try {
        r.assouad = assouad_formula(t);
    } catch (const SpongeError& e) {
        if (e.code() != ErrorCode::NotLalleyGatzouras) throw;
        r.warnings.push_back(std::string("assouad: ") + e.what());
    }
    r.ly = ly_dimension(t, weights_or_uniform(flags, t));
    r.mcmullen = mcmullen_if_carpet(t);
    return r;
}

Json dyndim_cmd(const SpongeTemplate& t, const Flags& flags) {
    DynamicalOptions opt;
    opt.restarts = static_cast<int>(flags.integer("restarts", 16));
    opt.tol = flags.real("tol", 1e-10);
    const long long seed = flags.integer("seed", 0);
    if (opt.restarts <= 0) bad_flag("restarts", flags.text("restarts"), "must be positive");
    if (!(opt.tol > 0)) bad_flag("tol", flags.text("tol"), "must be positive");
    if (seed < 0) bad_flag("seed", flags.text("seed"), "must be non-negative");
    opt.seed = static_cast<std::uint64_t>(seed);
    DimensionReport r;
    r.dynamical = dynamical_dimension(t, opt);
    r.mcmullen = mcmullen_if_carpet(t);
    return r;
}

Json subsystem_cmd(const SpongeTemplate& t, const Flags& flags) {
    flags.required("eps");
    flags.required("N");
    const double eps = flags.real("eps", 0.0);
    const long long N = flags.integer("N", 0);
    if (N <= 0) bad_flag("N", flags.text("N"), "must be positive");
    return build_subsystem(t, weights_or_uniform(flags, t), eps, static_cast<int>(N), subsystem_options(flags, t));
}

Json converge_cmd(const SpongeTemplate& t, const Flags& flags) {
    const auto eps = flags.reals("eps");
    std::vector<int> Ns;
    for (long long n : flags.integers("N")) {
        if (n <= 0) bad_flag("N", flags.text("N"), "lengths must be positive");
        Ns.push_back(static_cast<int>(n));
    }
    return convergence_study(t, weights_or_uniform(flags, t), eps, Ns, subsystem_options(flags, t));
}

// Witness prefixes come from the seed so the report stays reproducible.
constexpr std::size_t kWitnessPrefix = 64;

Json estimate_cmd(const SpongeTemplate& t, const Flags& flags) {
    const long long points = flags.integer("points", 100000);
    const long long depth = flags.integer("depth", 20);
    const long long seed = flags.integer("seed", 1);
    const long long centers = flags.integer("centers", 256);
    if (points <= 0) bad_flag("points", flags.text("points"), "must be positive");
    if (depth < 0) bad_flag("depth", flags.text("depth"), "must be non-negative");
    if (seed < 0) bad_flag("seed", flags.text("seed"), "must be non-negative");
    if (centers <= 0) bad_flag("centers", flags.text("centers"), "must be positive");

    AssouadOptions opt;
    opt.beta_exponents = flags.range("beta", 2, 7);
    opt.rho_exponents = flags.range("rho", 1, 9);
    opt.centers = static_cast<std::size_t>(centers);
    opt.seed = static_cast<std::uint64_t>(seed);

    const PointCloud cloud =
        sample_points(t, static_cast<std::size_t>(points), static_cast<int>(depth), static_cast<std::uint64_t>(seed));

    EstimateReport r;
    r.points = cloud.size();
    r.depth = cloud.depth;
    r.seed = static_cast<std::uint64_t>(seed);
    r.beta_exponents = opt.beta_exponents;
    r.rho_exponents = opt.rho_exponents;
    r.centers = opt.centers;
    r.estimate = estimate_assouad(cloud, opt, fixed_points(t));
    try {
        r.formula = assouad_formula(t);
    } catch (const SpongeError& e) {
        if (e.code() != ErrorCode::NotLalleyGatzouras) throw;
    }

    if (flags.on("witness")) {
        std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
        Word prefix(kWitnessPrefix);
        for (auto& a : prefix) a = static_cast<std::size_t>(rng() % t.size());
        try {
            for (int e : opt.rho_exponents) r.witnesses.push_back(diffuseness_witness(t, prefix, std::ldexp(1.0, -e)));
        } catch (const SpongeError& e) {
            if (is_input_error(e.code())) throw;
            r.witnesses.clear();
            r.witness_error = std::string(error_name(e.code())) + ": " + e.what();
        }
    }
    if (flags.on("flatness")) {
        try {
            r.flatness = flatness_certificate(t, cloud);
        } catch (const SpongeError& e) {
            if (is_input_error(e.code())) throw;
            r.flatness_error = std::string(error_name(e.code())) + ": " + e.what();
        }
    }
    if (flags.has("csv")) write_file(flags.text("csv"), count_table_csv(r.estimate));
    return r;
}

Json render_cmd(const SpongeTemplate& t, const Flags& flags) {
    const std::string path = flags.required("output");
    const long long size = flags.integer("size", 600);
    if (size <= 0 || size > 100000) bad_flag("size", flags.text("size"), "must lie in 1..100000");
    const SvgImage img = render_svg(t, static_cast<int>(size));
    write_file(path, img.text);
    RenderReport r;
    r.output = path;
    r.size = static_cast<int>(size);
    r.panels = img.panels;
    r.rectangles = img.rectangles;
    return r;
}

Json error_document(std::string_view name, const std::string& message) {
    return Json{{"error", std::string(name)}, {"message", message}};
}

CommandResult failure(int code, std::string_view name, const std::string& message) {
    return {code, {}, error_document(name, message).dump() + "\n"};
}

}  // namespace

CommandRequest parse_command_line(int argc, const char* const* argv) {
    CLI::App app{"Dimension tools for diagonal self-affine sponges", "sponge"};
    app.require_subcommand(1);

    struct Bound {
        CLI::App* app = nullptr;
        std::string input;
        std::map<std::string, std::string> values;
        std::map<std::string, bool> switches;
    };
    std::map<std::string, Bound> bound;
    for (const auto& [name, defs] : subcommand_options()) {
        Bound& b = bound[name];
        b.app = app.add_subcommand(name, subcommand_help(name));
        b.app->add_option("template", b.input, "template document")->required();
        for (const auto& def : defs) {
            if (def.is_switch) {
                b.app->add_flag(def.names, b.switches[def.key], def.help);
            } else {
                b.app->add_option(def.names, b.values[def.key], def.help);
            }
        }
    }

    CommandRequest req;
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        req.help = app.help();
        for (const auto& [name, b] : bound) {
            if (b.app->parsed()) req.help = b.app->help();
        }
        return req;
    } catch (const CLI::ParseError& e) {
        throw SpongeError(ErrorCode::InvalidArgument, e.what());
    }

    for (const auto& [name, b] : bound) {
        if (!b.app->parsed()) continue;
        req.subcommand = name;
        req.inputs.push_back(b.input);
        for (const auto& def : subcommand_options().at(name)) {
            if (def.is_switch) {
                if (b.switches.at(def.key)) req.flags[def.key] = "true";
            } else if (b.app->count(def.names.substr(def.names.rfind(',') + 1)) > 0) {
                req.flags[def.key] = b.values.at(def.key);
            }
        }
    }
    return req;
}

CommandResult run(const CommandRequest& request) {
    if (request.help) return {0, *request.help, {}};
    try {
        const auto& table = subcommand_options();
        if (!table.count(request.subcommand)) {
            throw SpongeError(ErrorCode::InvalidArgument, "unknown subcommand '" + request.subcommand + "'");
        }
        if (request.inputs.size() != 1) throw SpongeError(ErrorCode::InvalidArgument, "expected one template path");
        for (const auto& [key, value] : request.flags) {
            bool known = false;
            for (const auto& def : table.at(request.subcommand)) known = known || def.key == key;
            if (!known) throw SpongeError(ErrorCode::InvalidArgument, "unknown flag --" + key);
        }

        const std::string& path = request.inputs.front();
        const SpongeTemplate t = parse_template(read_file(path));
        const Flags flags(request.flags);
        const std::string& cmd = request.subcommand;

        Json report;
        Json seed = nullptr;
        if (cmd == "validate") {
            report = validate_cmd(t, flags);
        } else if (cmd == "check") {
            report = check_cmd(t, flags);
        } else if (cmd == "dims") {
            report = dims_cmd(t, flags);
        } else if (cmd == "dyndim") {
            report = dyndim_cmd(t, flags);
            seed = flags.integer("seed", 0);
        } else if (cmd == "subsystem") {
            report = subsystem_cmd(t, flags);
        } else if (cmd == "converge") {
            report = converge_cmd(t, flags);
        } else if (cmd == "estimate") {
            report = estimate_cmd(t, flags);
            seed = flags.integer("seed", 1);
        } else {
            report = render_cmd(t, flags);
        }

        Json doc{{"command", cmd}, {"input", path}, {"seed", std::move(seed)}, {"report", std::move(report)}};
        return {0, doc.dump(2) + "\n", {}};
    } catch (const SpongeError& e) {
        return failure(is_input_error(e.code()) ? 1 : 2, error_name(e.code()), e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        return failure(1, error_name(ErrorCode::InvalidArgument), e.what());
    } catch (const std::exception& e) {
        return failure(2, "InternalError", e.what());
    }
}

CommandResult run_command_line(int argc, const char* const* argv) {
    CommandRequest req;
    try {
        req = parse_command_line(argc, argv);
    } catch (const SpongeError& e) {
        return failure(1, error_name(e.code()), e.what());
    }
    return run(req);
}

}  // namespace sponge
