#include <sponge/report.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace sponge {

Json real_to_json(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double real_from_json(const Json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        throw SpongeError(ErrorCode::MalformedInput, "not a number: " + s);
    }
    return j.get<double>();
}

Diffuseness diffuseness_from_name(std::string_view name) {
    for (auto v : {Diffuseness::Diffuse, Diffuseness::NotDiffuseNoSubsets, Diffuseness::NotDiffuse, Diffuseness::Undecided}) {
        if (diffuseness_name(v) == name) return v;
    }
    throw SpongeError(ErrorCode::MalformedInput, "unknown diffuseness verdict " + std::string(name));
}

namespace {

Json reals(const std::vector<double>& v) {
    Json out = Json::array();
    for (double x : v) out.push_back(real_to_json(x));
    return out;
}

std::vector<double> reals_of(const Json& j) {
    std::vector<double> out;
    for (const auto& x : j) out.push_back(real_from_json(x));
    return out;
}

template <class T>
Json maybe(const std::optional<T>& v) {
    if (!v) return nullptr;
    if constexpr (std::is_same_v<T, double>) {
        return real_to_json(*v);
    } else {
        return Json(*v);
    }
}

template <class T>
std::optional<T> maybe_of(const Json& j) {
    if (j.is_null()) return std::nullopt;
    if constexpr (std::is_same_v<T, double>) {
        return real_from_json(j);
    } else {
        return j.get<T>();
    }
}

}  // namespace

Json template_to_json(const SpongeTemplate& t) { return Json::parse(serialize_template(t)); }

SpongeTemplate template_from_json(const Json& j) { return parse_template(j.dump()); }

void to_json(Json& j, const PartialOrder& v) { j = Json{{"precedes", v.rel}}; }
void from_json(const Json& j, PartialOrder& v) { v.rel = j.at("precedes").get<std::vector<std::vector<bool>>>(); }

void to_json(Json& j, const Classification& v) {
    j = Json{{"baranski", v.baranski},
             {"strongly_baranski", v.strongly_baranski},
             {"sierpinski", v.sierpinski},
             {"distinguishable", v.distinguishable},
             {"lg_sigma", maybe(v.lg_sigma)},
             {"lalley_gatzouras", v.lalley_gatzouras},
             {"strongly_lg", v.strongly_lg}};
}
void from_json(const Json& j, Classification& v) {
    v.baranski = j.at("baranski");
    v.strongly_baranski = j.at("strongly_baranski");
    v.sierpinski = j.at("sierpinski");
    v.distinguishable = j.at("distinguishable");
    v.lg_sigma = maybe_of<std::vector<int>>(j.at("lg_sigma"));
    v.lalley_gatzouras = j.at("lalley_gatzouras");
    v.strongly_lg = j.at("strongly_lg");
}

void to_json(Json& j, const WitnessPair& v) { j = Json{{"a", v.a}, {"b", v.b}}; }
void from_json(const Json& j, WitnessPair& v) {
    v.a = j.at("a");
    v.b = j.at("b");
}

void to_json(Json& j, const Irreducibility& v) {
    Json witnesses = Json::array();
    for (const auto& w : v.witnesses) witnesses.push_back(maybe(w));
    Json counter = nullptr;
    if (v.counterexample) counter = Json{{"coordinate", v.counterexample->first}, {"digit", v.counterexample->second}};
    j = Json{{"irreducible", v.irreducible},
             {"witnesses", std::move(witnesses)},
             {"uniformly_irreducible", v.uniformly_irreducible},
             {"counterexample", std::move(counter)}};
}
void from_json(const Json& j, Irreducibility& v) {
    v.irreducible = j.at("irreducible");
    v.witnesses.clear();
    for (const auto& w : j.at("witnesses")) v.witnesses.push_back(maybe_of<WitnessPair>(w));
    v.uniformly_irreducible = j.at("uniformly_irreducible");
    const auto& c = j.at("counterexample");
    if (c.is_null()) {
        v.counterexample.reset();
    } else {
        v.counterexample = std::make_pair(c.at("coordinate").get<int>(), c.at("digit").get<std::size_t>());
    }
}

void to_json(Json& j, const MeasureProfile& v) {
    j = Json{{"chi", reals(v.chi)},
             {"order", v.order},
             {"irreducible_wrt", v.irreducible_wrt},
             {"distinct_lyapunov", v.distinct_lyapunov},
             {"good", v.good},
             {"strongly_good", v.strongly_good},
             {"exact_comparisons", v.exact_comparisons},
             {"level_sets", v.level_sets},
             {"warnings", v.warnings}};
}
void from_json(const Json& j, MeasureProfile& v) {
    v.chi = reals_of(j.at("chi"));
    v.order = j.at("order");
    v.irreducible_wrt = j.at("irreducible_wrt");
    v.distinct_lyapunov = j.at("distinct_lyapunov");
    v.good = j.at("good");
    v.strongly_good = j.at("strongly_good");
    v.exact_comparisons = j.at("exact_comparisons");
    v.level_sets = j.at("level_sets").get<std::vector<std::vector<int>>>();
    v.warnings = j.at("warnings").get<std::vector<std::string>>();
}

void to_json(Json& j, const DiffusenessDecision& v) {
    j = Json{{"verdict", std::string(diffuseness_name(v.verdict))}, {"reason", v.reason}};
}
void from_json(const Json& j, DiffusenessDecision& v) {
    v.verdict = diffuseness_from_name(j.at("verdict").get<std::string>());
    v.reason = j.at("reason");
}

void to_json(Json& j, const SeparationConstant& v) {
    j = Json{{"value", v.value ? Json(v.value->to_string()) : Json(nullptr)}, {"warnings", v.warnings}};
}
void from_json(const Json& j, SeparationConstant& v) {
    const auto& value = j.at("value");
    if (value.is_null()) {
        v.value.reset();
    } else {
        v.value = Number::parse(value.get<std::string>());
    }
    v.warnings = j.at("warnings").get<std::vector<std::string>>();
}

void to_json(Json& j, const FiberDimension& v) {
    j = Json{{"prefix", v.prefix}, {"letters", v.letters}, {"dimension", real_to_json(v.dimension)}};
}
void from_json(const Json& j, FiberDimension& v) {
    v.prefix = j.at("prefix").get<std::vector<int>>();
    v.letters = j.at("letters").get<std::vector<std::vector<int>>>();
    v.dimension = real_from_json(j.at("dimension"));
}

void to_json(Json& j, const AssouadFormula& v) {
    j = Json{{"sigma", v.sigma},
             {"blocks", v.blocks},
             {"lower", real_to_json(v.lower)},
             {"upper", real_to_json(v.upper)},
             {"lower_terms", reals(v.lower_terms)},
             {"upper_terms", reals(v.upper_terms)},
             {"fibers", v.fibers},
             {"warnings", v.warnings}};
}
void from_json(const Json& j, AssouadFormula& v) {
    v.sigma = j.at("sigma").get<std::vector<int>>();
    v.blocks = j.at("blocks").get<std::vector<std::vector<int>>>();
    v.lower = real_from_json(j.at("lower"));
    v.upper = real_from_json(j.at("upper"));
    v.lower_terms = reals_of(j.at("lower_terms"));
    v.upper_terms = reals_of(j.at("upper_terms"));
    v.fibers = j.at("fibers").get<std::vector<std::vector<FiberDimension>>>();
    v.warnings = j.at("warnings").get<std::vector<std::string>>();
}

void to_json(Json& j, const LyBreakdown& v) {
    j = Json{{"dimension", real_to_json(v.dimension)},
             {"order", v.order},
             {"chi", reals(v.chi)},
             {"entropy", reals(v.entropy)},
             {"warnings", v.warnings}};
}
void from_json(const Json& j, LyBreakdown& v) {
    v.dimension = real_from_json(j.at("dimension"));
    v.order = j.at("order").get<std::vector<int>>();
    v.chi = reals_of(j.at("chi"));
    v.entropy = reals_of(j.at("entropy"));
    v.warnings = j.at("warnings").get<std::vector<std::string>>();
}

void to_json(Json& j, const RestartResult& v) {
    j = Json{{"start_value", real_to_json(v.start_value)},
             {"value", real_to_json(v.value)},
             {"converged", v.converged},
             {"iterations", v.iterations}};
}
void from_json(const Json& j, RestartResult& v) {
    v.start_value = real_from_json(j.at("start_value"));
    v.value = real_from_json(j.at("value"));
    v.converged = j.at("converged");
    v.iterations = j.at("iterations");
}

void to_json(Json& j, const DynamicalResult& v) {
    j = Json{{"value", real_to_json(v.value)},
             {"weights", reals(v.weights)},
             {"restarts", v.restarts},
             {"evaluations", v.evaluations},
             {"pruned", v.pruned}};
}
void from_json(const Json& j, DynamicalResult& v) {
    v.value = real_from_json(j.at("value"));
    v.weights = reals_of(j.at("weights"));
    v.restarts = j.at("restarts").get<std::vector<RestartResult>>();
    v.evaluations = j.at("evaluations");
    v.pruned = j.at("pruned");
}

void to_json(Json& j, const SubsystemReport& v) {
    j = Json{{"N", v.N},
             {"eps", real_to_json(v.eps)},
             {"order", v.order},
             {"chi", reals(v.chi)},
             {"entropy", reals(v.entropy)},
             {"S_size", v.S_size},
             {"S_mass", real_to_json(v.S_mass)},
             {"chain_sizes", v.chain_sizes},
             {"chain_masses", reals(v.chain_masses)},
             {"tau", v.tau},
             {"members", v.members},
             {"psi", v.psi ? template_to_json(*v.psi) : Json(nullptr)},
             {"delta_raw", reals(v.delta_raw)},
             {"delta", reals(v.delta)},
             {"delta_sum", real_to_json(v.delta_sum)},
             {"strongly_lg", v.strongly_lg},
             {"formula_lower", maybe(v.formula_lower)},
             {"formula_upper", maybe(v.formula_upper)},
             {"uniformly_irreducible", v.uniformly_irreducible},
             {"min_fiber_count", v.min_fiber_count},
             {"fiber_criterion", v.fiber_criterion},
             {"claim_holds", v.claim_holds},
             {"t0_inequality_holds", v.t0_inequality_holds},
             {"lower_bound_holds", maybe(v.lower_bound_holds)},
             {"ly_dimension", real_to_json(v.ly_dimension)},
             {"limit", real_to_json(v.limit)},
             {"warnings", v.warnings}};
}
void from_json(const Json& j, SubsystemReport& v) {
    v.N = j.at("N");
    v.eps = real_from_json(j.at("eps"));
    v.order = j.at("order").get<std::vector<int>>();
    v.chi = reals_of(j.at("chi"));
    v.entropy = reals_of(j.at("entropy"));
    v.S_size = j.at("S_size");
    v.S_mass = real_from_json(j.at("S_mass"));
    v.chain_sizes = j.at("chain_sizes").get<std::vector<std::size_t>>();
    v.chain_masses = reals_of(j.at("chain_masses"));
    v.tau = j.at("tau").get<Word>();
    v.members = j.at("members").get<std::vector<std::uint64_t>>();
    const auto& psi = j.at("psi");
    if (psi.is_null()) {
        v.psi.reset();
    } else {
        v.psi = template_from_json(psi);
    }
    v.delta_raw = reals_of(j.at("delta_raw"));
    v.delta = reals_of(j.at("delta"));
    v.delta_sum = real_from_json(j.at("delta_sum"));
    v.strongly_lg = j.at("strongly_lg");
    v.formula_lower = maybe_of<double>(j.at("formula_lower"));
    v.formula_upper = maybe_of<double>(j.at("formula_upper"));
    v.uniformly_irreducible = j.at("uniformly_irreducible");
    v.min_fiber_count = j.at("min_fiber_count");
    v.fiber_criterion = j.at("fiber_criterion");
    v.claim_holds = j.at("claim_holds");
    v.t0_inequality_holds = j.at("t0_inequality_holds");
    v.lower_bound_holds = maybe_of<bool>(j.at("lower_bound_holds"));
    v.ly_dimension = real_from_json(j.at("ly_dimension"));
    v.limit = real_from_json(j.at("limit"));
    v.warnings = j.at("warnings").get<std::vector<std::string>>();
}

void to_json(Json& j, const ConvergenceRow& v) {
    j = Json{{"eps", real_to_json(v.eps)},
             {"N", v.N},
             {"delta_sum", real_to_json(v.delta_sum)},
             {"formula_lower", maybe(v.formula_lower)},
             {"t0_mass", real_to_json(v.t0_mass)},
             {"uniformly_irreducible", v.uniformly_irreducible},
             {"limit", real_to_json(v.limit)}};
}
void from_json(const Json& j, ConvergenceRow& v) {
    v.eps = real_from_json(j.at("eps"));
    v.N = j.at("N");
    v.delta_sum = real_from_json(j.at("delta_sum"));
    v.formula_lower = maybe_of<double>(j.at("formula_lower"));
    v.t0_mass = real_from_json(j.at("t0_mass"));
    v.uniformly_irreducible = j.at("uniformly_irreducible");
    v.limit = real_from_json(j.at("limit"));
}

void to_json(Json& j, const ConvergenceStudy& v) {
    j = Json{{"rows", v.rows}, {"ly_dimension", real_to_json(v.ly_dimension)}};
}
void from_json(const Json& j, ConvergenceStudy& v) {
    v.rows = j.at("rows").get<std::vector<ConvergenceRow>>();
    v.ly_dimension = real_from_json(j.at("ly_dimension"));
}

void to_json(Json& j, const CountRow& v) {
    j = Json{{"beta", v.beta_exponent}, {"rho", v.rho_exponent}, {"center", v.center},
             {"count", v.count},        {"ball_points", v.ball_points}, {"resolved", v.resolved}};
}
void from_json(const Json& j, CountRow& v) {
    v.beta_exponent = j.at("beta");
    v.rho_exponent = j.at("rho");
    v.center = j.at("center");
    v.count = j.at("count");
    v.ball_points = j.at("ball_points");
    v.resolved = j.at("resolved");
}

void to_json(Json& j, const SlopeRow& v) {
    j = Json{{"rho", v.rho_exponent}, {"center", v.center}, {"slope", real_to_json(v.slope)}, {"scales", v.scales}};
}
void from_json(const Json& j, SlopeRow& v) {
    v.rho_exponent = j.at("rho");
    v.center = j.at("center");
    v.slope = real_from_json(j.at("slope"));
    v.scales = j.at("scales");
}

void to_json(Json& j, const AssouadEstimate& v) {
    j = Json{{"lower_delta1", real_to_json(v.lower_delta1)},
             {"upper_delta1", real_to_json(v.upper_delta1)},
             {"lower_delta2", real_to_json(v.lower_delta2)},
             {"upper_delta2", real_to_json(v.upper_delta2)},
             {"usable_rho", v.usable_rho},
             {"skipped_balls", v.skipped_balls},
             {"slopes", v.slopes},
             {"table", v.table},
             {"warnings", v.warnings}};
}
void from_json(const Json& j, AssouadEstimate& v) {
    v.lower_delta1 = real_from_json(j.at("lower_delta1"));
    v.upper_delta1 = real_from_json(j.at("upper_delta1"));
    v.lower_delta2 = real_from_json(j.at("lower_delta2"));
    v.upper_delta2 = real_from_json(j.at("upper_delta2"));
    v.usable_rho = j.at("usable_rho").get<std::vector<int>>();
    v.skipped_balls = j.at("skipped_balls");
    v.slopes = j.at("slopes").get<std::vector<SlopeRow>>();
    v.table = j.at("table").get<std::vector<CountRow>>();
    v.warnings = j.at("warnings").get<std::vector<std::string>>();
}

void to_json(Json& j, const WitnessReport& v) {
    Json witnesses = Json::array(), matrix = Json::array();
    for (const auto& w : v.witnesses) witnesses.push_back(reals(w));
    for (const auto& row : v.matrix) matrix.push_back(reals(row));
    j = Json{{"sigma", v.sigma},
             {"rho", real_to_json(v.rho)},
             {"base_point", reals(v.base_point)},
             {"witnesses", std::move(witnesses)},
             {"depths", v.depths},
             {"swap_letters", v.swap_letters},
             {"matrix", std::move(matrix)},
             {"diagonal_ratios", reals(v.diagonal_ratios)},
             {"below_diagonal_max", real_to_json(v.below_diagonal_max)},
             {"entry_max", real_to_json(v.entry_max)},
             {"tolerance", real_to_json(v.tolerance)},
             {"c", real_to_json(v.c)},
             {"upper_triangular", v.upper_triangular},
             {"diagonal_bounded", v.diagonal_bounded},
             {"in_ball", v.in_ball}};
}
void from_json(const Json& j, WitnessReport& v) {
    v.sigma = j.at("sigma").get<std::vector<int>>();
    v.rho = real_from_json(j.at("rho"));
    v.base_point = reals_of(j.at("base_point"));
    v.witnesses.clear();
    for (const auto& w : j.at("witnesses")) v.witnesses.push_back(reals_of(w));
    v.depths = j.at("depths").get<std::vector<int>>();
    v.swap_letters = j.at("swap_letters").get<std::vector<std::size_t>>();
    v.matrix.clear();
    for (const auto& row : j.at("matrix")) v.matrix.push_back(reals_of(row));
    v.diagonal_ratios = reals_of(j.at("diagonal_ratios"));
    v.below_diagonal_max = real_from_json(j.at("below_diagonal_max"));
    v.entry_max = real_from_json(j.at("entry_max"));
    v.tolerance = real_from_json(j.at("tolerance"));
    v.c = real_from_json(j.at("c"));
    v.upper_triangular = j.at("upper_triangular");
    v.diagonal_bounded = j.at("diagonal_bounded");
    v.in_ball = j.at("in_ball");
}

void to_json(Json& j, const FlatnessScale& v) {
    j = Json{{"rho", v.rho_exponent},
             {"ball_points", v.ball_points},
             {"max_distance", real_to_json(v.max_distance)},
             {"constant", real_to_json(v.constant)}};
}
void from_json(const Json& j, FlatnessScale& v) {
    v.rho_exponent = j.at("rho");
    v.ball_points = j.at("ball_points");
    v.max_distance = real_from_json(j.at("max_distance"));
    v.constant = real_from_json(j.at("constant"));
}

void to_json(Json& j, const FlatnessCertificate& v) {
    j = Json{{"coordinate", v.coordinate},
             {"digit", v.digit},
             {"base_point", reals(v.base_point)},
             {"alpha", real_to_json(v.alpha)},
             {"degenerate", v.degenerate},
             {"resolution", real_to_json(v.resolution)},
             {"scales", v.scales},
             {"fitted_exponent", real_to_json(v.fitted_exponent)},
             {"constant_spread", real_to_json(v.constant_spread)},
             {"passed", v.passed},
             {"warnings", v.warnings}};
}
void from_json(const Json& j, FlatnessCertificate& v) {
    v.coordinate = j.at("coordinate");
    v.digit = j.at("digit");
    v.base_point = reals_of(j.at("base_point"));
    v.alpha = real_from_json(j.at("alpha"));
    v.degenerate = j.at("degenerate");
    v.resolution = real_from_json(j.at("resolution"));
    v.scales = j.at("scales").get<std::vector<FlatnessScale>>();
    v.fitted_exponent = real_from_json(j.at("fitted_exponent"));
    v.constant_spread = real_from_json(j.at("constant_spread"));
    v.passed = j.at("passed");
    v.warnings = j.at("warnings").get<std::vector<std::string>>();
}

void to_json(Json& j, const ValidateReport& v) {
    j = Json{{"dimension", v.dimension},
             {"digits", v.digits},
             {"exact", v.exact},
             {"canonical", v.canonical},
             {"weights", maybe(v.weights)}};
}
void from_json(const Json& j, ValidateReport& v) {
    v.dimension = j.at("dimension");
    v.digits = j.at("digits");
    v.exact = j.at("exact");
    v.canonical = j.at("canonical");
    v.weights = maybe_of<std::vector<std::string>>(j.at("weights"));
}

void to_json(Json& j, const CheckReport& v) {
    j = Json{{"classification", v.classification},
             {"partial_order", v.order},
             {"irreducibility", v.irreducibility},
             {"diffuseness", v.diffuseness},
             {"separation", maybe(v.separation)},
             {"measure", maybe(v.measure)}};
}
void from_json(const Json& j, CheckReport& v) {
    v.classification = j.at("classification");
    v.order = j.at("partial_order");
    v.irreducibility = j.at("irreducibility");
    v.diffuseness = j.at("diffuseness");
    v.separation = maybe_of<SeparationConstant>(j.at("separation"));
    v.measure = maybe_of<MeasureProfile>(j.at("measure"));
}

void to_json(Json& j, const DimensionReport& v) {
    j = Json{{"assouad", maybe(v.assouad)},
             {"ly", maybe(v.ly)},
             {"dynamical", maybe(v.dynamical)},
             {"mcmullen", maybe(v.mcmullen)},
             {"warnings", v.warnings}};
}
void from_json(const Json& j, DimensionReport& v) {
    v.assouad = maybe_of<AssouadFormula>(j.at("assouad"));
    v.ly = maybe_of<LyBreakdown>(j.at("ly"));
    v.dynamical = maybe_of<DynamicalResult>(j.at("dynamical"));
    v.mcmullen = maybe_of<double>(j.at("mcmullen"));
    v.warnings = j.at("warnings").get<std::vector<std::string>>();
}

void to_json(Json& j, const EstimateReport& v) {
    j = Json{{"points", v.points},
             {"depth", v.depth},
             {"seed", v.seed},
             {"beta_exponents", v.beta_exponents},
             {"rho_exponents", v.rho_exponents},
             {"centers", v.centers},
             {"estimate", v.estimate},
             {"formula", maybe(v.formula)},
             {"witnesses", v.witnesses},
             {"witness_error", maybe(v.witness_error)},
             {"flatness", maybe(v.flatness)},
             {"flatness_error", maybe(v.flatness_error)}};
}
void from_json(const Json& j, EstimateReport& v) {
    v.points = j.at("points");
    v.depth = j.at("depth");
    v.seed = j.at("seed");
    v.beta_exponents = j.at("beta_exponents").get<std::vector<int>>();
    v.rho_exponents = j.at("rho_exponents").get<std::vector<int>>();
    v.centers = j.at("centers");
    v.estimate = j.at("estimate");
    v.formula = maybe_of<AssouadFormula>(j.at("formula"));
    v.witnesses = j.at("witnesses").get<std::vector<WitnessReport>>();
    v.witness_error = maybe_of<std::string>(j.at("witness_error"));
    v.flatness = maybe_of<FlatnessCertificate>(j.at("flatness"));
    v.flatness_error = maybe_of<std::string>(j.at("flatness_error"));
}

void to_json(Json& j, const RenderReport& v) {
    j = Json{{"output", v.output}, {"size", v.size}, {"panels", v.panels}, {"rectangles", v.rectangles}};
}
void from_json(const Json& j, RenderReport& v) {
    v.output = j.at("output");
    v.size = j.at("size");
    v.panels = j.at("panels");
    v.rectangles = j.at("rectangles");
}

std::string count_table_csv(const AssouadEstimate& e) {
    std::ostringstream out;
    out << "beta_exponent,rho_exponent,center,count,ball_points,resolved\n";
    for (const auto& r : e.table) {
        out << r.beta_exponent << ',' << r.rho_exponent << ',' << r.center << ',' << r.count << ',' << r.ball_points << ','
            << (r.resolved ? 1 : 0) << '\n';
    }
    return out.str();
}

}  // namespace sponge
