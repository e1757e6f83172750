#pragma once

#include <sponge/dimension.hpp>
#include <sponge/estimate.hpp>
#include <sponge/structure.hpp>
#include <sponge/subsystem.hpp>

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace sponge {

/// Report documents keep insertion order so the output is byte-stable.
using Json = nlohmann::ordered_json;

/// Doubles as JSON numbers; infinities and NaN become the strings "inf",
/// "-inf" and "nan" so that nothing is lost to null.
Json real_to_json(double v);
double real_from_json(const Json& j);

Diffuseness diffuseness_from_name(std::string_view name);

struct ValidateReport {
    int dimension = 0;
    std::size_t digits = 0;
    bool exact = false;
    Json canonical;  ///< the template re-serialized
    std::optional<std::vector<std::string>> weights;
};

struct CheckReport {
    Classification classification;
    PartialOrder order;
    Irreducibility irreducibility;
    DiffusenessDecision diffuseness;
    std::optional<SeparationConstant> separation;  ///< when a strict ordering exists
    std::optional<MeasureProfile> measure;
};

struct DimensionReport {
    std::optional<AssouadFormula> assouad;
    std::optional<LyBreakdown> ly;
    std::optional<DynamicalResult> dynamical;
    std::optional<double> mcmullen;
    std::vector<std::string> warnings;
};

struct EstimateReport {
    std::size_t points = 0;
    int depth = 0;
    std::uint64_t seed = 0;
    std::vector<int> beta_exponents;
    std::vector<int> rho_exponents;
    std::size_t centers = 0;
    AssouadEstimate estimate;
    std::optional<AssouadFormula> formula;
    std::vector<WitnessReport> witnesses;
    std::optional<std::string> witness_error;
    std::optional<FlatnessCertificate> flatness;
    std::optional<std::string> flatness_error;
};

struct RenderReport {
    std::string output;
    int size = 0;
    int panels = 0;
    std::size_t rectangles = 0;
};

void to_json(Json& j, const PartialOrder& v);
void from_json(const Json& j, PartialOrder& v);
void to_json(Json& j, const Classification& v);
void from_json(const Json& j, Classification& v);
void to_json(Json& j, const WitnessPair& v);
void from_json(const Json& j, WitnessPair& v);
void to_json(Json& j, const Irreducibility& v);
void from_json(const Json& j, Irreducibility& v);
void to_json(Json& j, const MeasureProfile& v);
void from_json(const Json& j, MeasureProfile& v);
void to_json(Json& j, const DiffusenessDecision& v);
void from_json(const Json& j, DiffusenessDecision& v);
void to_json(Json& j, const SeparationConstant& v);
void from_json(const Json& j, SeparationConstant& v);
void to_json(Json& j, const FiberDimension& v);
void from_json(const Json& j, FiberDimension& v);
void to_json(Json& j, const AssouadFormula& v);
void from_json(const Json& j, AssouadFormula& v);
void to_json(Json& j, const LyBreakdown& v);
void from_json(const Json& j, LyBreakdown& v);
void to_json(Json& j, const RestartResult& v);
void from_json(const Json& j, RestartResult& v);
void to_json(Json& j, const DynamicalResult& v);
void from_json(const Json& j, DynamicalResult& v);
void to_json(Json& j, const SubsystemReport& v);
void from_json(const Json& j, SubsystemReport& v);
void to_json(Json& j, const ConvergenceRow& v);
void from_json(const Json& j, ConvergenceRow& v);
void to_json(Json& j, const ConvergenceStudy& v);
void from_json(const Json& j, ConvergenceStudy& v);
void to_json(Json& j, const CountRow& v);
void from_json(const Json& j, CountRow& v);
void to_json(Json& j, const SlopeRow& v);
void from_json(const Json& j, SlopeRow& v);
void to_json(Json& j, const AssouadEstimate& v);
void from_json(const Json& j, AssouadEstimate& v);
void to_json(Json& j, const WitnessReport& v);
void from_json(const Json& j, WitnessReport& v);
void to_json(Json& j, const FlatnessScale& v);
void from_json(const Json& j, FlatnessScale& v);
void to_json(Json& j, const FlatnessCertificate& v);
void from_json(const Json& j, FlatnessCertificate& v);
void to_json(Json& j, const ValidateReport& v);
void from_json(const Json& j, ValidateReport& v);
void to_json(Json& j, const CheckReport& v);
void from_json(const Json& j, CheckReport& v);
void to_json(Json& j, const DimensionReport& v);
void from_json(const Json& j, DimensionReport& v);
void to_json(Json& j, const EstimateReport& v);
void from_json(const Json& j, EstimateReport& v);
void to_json(Json& j, const RenderReport& v);
void from_json(const Json& j, RenderReport& v);

/// Template as an embedded document, in the same long form parse_template reads.
Json template_to_json(const SpongeTemplate& t);
SpongeTemplate template_from_json(const Json& j);

/// Rows of the count table as CSV with a header line.
std::string count_table_csv(const AssouadEstimate& e);

}  // namespace sponge
