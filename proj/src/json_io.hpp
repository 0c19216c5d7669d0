#ifndef TDS_JSON_IO_HPP
#define TDS_JSON_IO_HPP

#include <string>

#include "distributed.hpp"
#include "line.hpp"
#include "polecount.hpp"
#include "region.hpp"

namespace tds {

// System descriptor:
// { "m": int, "params": [names], "terms": [{"power": int, "coeff": expr,
//   "delay": expr}], "lower_bounds": [reals]? }
// "delay" defaults to "0"; expressions use the documented grammar.
CharFun charfun_from_json(const std::string& text);
std::string charfun_to_json(const CharFun& cf, int indent = 2);

// Model descriptor:
// { "dim": int, "A0": [[...]], "discrete": [{"A": [[...]], "delay": num|name}],
//   "distributed": [{"A": [[...]], "lower": num|name, "upper": num|name,
//   "kernel": [coeffs]}] }
// Matrices are arrays of rows or flat row-major arrays.
DistributedModel model_from_json(const std::string& text);

std::string hypothesis_report_to_json(const CharFun& cf, const HypothesisReport& rep,
                                      int indent = 2);
std::string polecount_report_to_json(const PoleCountReport& rep, int indent = 2);
std::string conversion_to_json(const ConvertedCharFun& conv, int indent = 2);

// Ray task:
// { "point": [..], "direction": [..], "eta"?, "delta"?, "theta_max"?, "theta0"? }
RayTask ray_task_from_json(const CharFun& cf, const std::string& text);
std::string line_trace_to_json(const CharFun& cf, const RayTask& task, const LineTrace& trace,
                               int indent = 2);
std::string line_trace_to_csv(const LineTrace& trace);

// Region task:
// { "point": [..], "p"?: num|"inf", "q"?: num|"inf", "eta"?, "grid_h"?,
//   "extent"?, "max_generations"?, "max_balls"? }
struct RegionTask {
    ParamPoint tau0;
    RegionConfig config;
};
RegionTask region_task_from_json(const CharFun& cf, const std::string& text);
std::string region_state_to_json(const CharFun& cf, const RegionTask& task,
                                 const RegionState& state, int indent = 2);

} // namespace tds

#endif
