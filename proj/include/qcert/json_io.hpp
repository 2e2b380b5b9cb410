#pragma once

#include <string>

#include <json.hpp>

#include "qcert/numrange.hpp"
#include "qcert/simulator.hpp"

namespace qcert {

using Json = nlohmann::json;

/// Shared matrix format: {"rows": n, "cols": m, "entries": [[re, im], ...]},
/// entries row-major.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

Json range_set_to_json(const RangeSet& r);
RangeSet range_set_from_json(const Json& j);

Json sim_report_to_json(const SimReport& r);
SimReport sim_report_from_json(const Json& j);

Json state_strategy_to_json(const StateStrategy& s);
Json unitary_strategy_to_json(const UnitaryStrategy& s);
Json povm_strategy_to_json(const DephasedStrategy& s);

/// Built-in named matrices: "hadamard", "fig1" (diag(1, e^{i pi/3},
/// e^{2 i pi/3})), "fig2" (diag(1, e^{i pi/3})). Returns an empty optional
/// for unknown names.
bool is_builtin_matrix(const std::string& name);
Matrix builtin_matrix(const std::string& name);

/// Load a matrix from a builtin name or a JSON file path.
Matrix load_matrix(const std::string& name_or_path);
UnitaryOperator load_unitary(const std::string& name_or_path,
                             const Config& cfg = default_config());
PureState load_pure_state(const std::string& path, const Config& cfg = default_config());

}  // namespace qcert
