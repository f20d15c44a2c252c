#pragma once

#include <string>

#include <json.hpp>

#include "opnorm/bounds.hpp"
#include "opnorm/dist.hpp"
#include "opnorm/matgraph.hpp"
#include "opnorm/norms.hpp"
#include "opnorm/orlicz.hpp"

namespace opnorm {

using Json = nlohmann::json;

// {"kind":"weibull","r":0.5,"scale":1.0,"normalize_to":1.0}
// {"kind":"discrete","support":[[1.0,0.5],[-1.0,0.5]]}
DistSpec dist_from_json(const Json& j);
Json dist_to_json(const DistSpec& d);

// {"gen":"identity"|"ones"|"band"|"sparse_bernoulli"|"circulant","n":...}
// band: "bandwidth" (default 1); circulant: "bandwidth" wrap-around
// offsets (default 1); sparse_bernoulli: "prob" (default 3/n), "seed".
CoeffMatrix matrix_from_generator(const Json& j);

// dense CSV, one row per line, comma separated
CoeffMatrix matrix_from_csv(const std::string& path);
void matrix_to_csv(const CoeffMatrix& a, const std::string& path);

Json estimate_to_json(const EstimateResult& r);
Json bound_report_to_json(const BoundReport& r);
Json orlicz_solution_to_json(const OrliczSolution& s);

// fixed sweep schema, asserted by a golden-header test
extern const char* const kSweepHeader;
std::string sweep_row(const std::string& ensemble, const BoundReport& r);

}  // namespace opnorm
