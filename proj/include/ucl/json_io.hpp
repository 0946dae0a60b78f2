#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "ucl/channel.hpp"
#include "ucl/fidelity.hpp"
#include "ucl/optima.hpp"
#include "ucl/search.hpp"
#include "ucl/structure.hpp"

namespace ucl {

using Json = nlohmann::json;

// Matrices: {"dim": n, "re": [[..]], "im": [[..]]}, row-major.
// States:   {"dim": n, "re": [..], "im": [..]}.
Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

Json to_json(const PureState& s);
PureState state_from_json(const Json& j);

Json to_json(const ChoiState& a);
ChoiState choi_from_json(const Json& j);

Json to_json(const FilterChannel& ch);
FilterChannel filter_from_json(const Json& j);

Json to_json(const Channel& ch);
// Sniffs the representation: a "filter" key means FilterChannel, a "matrix"
// key means ChoiState. Validates invariants after parsing.
Channel channel_from_json(const Json& j);

Json to_json(const FidelityReport& r);
Json to_json(const OptimaReport& r);
Json to_json(const ProductVerdict& v);
Json to_json(const SearchConfig& c);
Json to_json(const SearchResult& r);

// Aligned-column CSV with header case,d,M,D,lambda,xi,gamma,f_bar,f_k,f_other.
// Quantities that do not exist for a case are left empty.
std::string table_to_csv(const std::vector<OptimaReport>& rows);

}  // namespace ucl
