#pragma once

#include <string>

#include "freelevy/decomposition.hpp"
#include "freelevy/integration.hpp"
#include "freelevy/rmt/ensembles.hpp"
#include "freelevy/transforms.hpp"
#include "json.hpp"

namespace freelevy {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Every from_json throws Error(kParseError) on missing or mistyped fields and
// the usual validation errors on out-of-range values. Writers emit sorted
// keys and shortest round-trip doubles; top-level documents carry "schema".

Json levy_measure_to_json(const LevyMeasure& r);
LevyMeasure levy_measure_from_json(const Json& j);

Json triplet_to_json(const FreeTriplet& u);
FreeTriplet triplet_from_json(const Json& j);

Json set_to_json(const SetExpr& s);
SetExpr set_from_json(const Json& j);  // [[lo,hi],...] or a set-expression string

Json field_to_json(const SeedField& f);
SeedField field_from_json(const Json& j);

Json integrand_to_json(const Integrand& f);
Integrand integrand_from_json(const Json& j);

Json signed_measure_to_json(const SignedSetMeasure& m);
SignedSetMeasure signed_measure_from_json(const Json& j);

Json levy_ito_to_json(const LevyItoParts& p);

Json model_to_json(const FCRMModel& m);
FCRMModel model_from_json(const Json& j);

Json kingman_to_json(const KingmanResult& k);

Json convergence_to_json(const ConvergenceReport& r);

Json density_sidecar_to_json(const SpectralDensity& d);

Json cumulants_to_json(const CumulantVector& k);

Json ensemble_to_json(const rmt::Ensemble& e);
rmt::Ensemble ensemble_from_json(const Json& j);

// Parses text into JSON, mapping syntax errors to kParseError.
Json parse_json(const std::string& text);

// Canonical serialization: 2-space indent, trailing newline.
std::string dump_json(const Json& j);

}  // namespace freelevy
