#pragma once

#include <optional>
#include <string>

#include "qpbraid/bplus_graph.hpp"
#include "qpbraid/braid.hpp"
#include "qpbraid/branch_locus.hpp"
#include "qpbraid/loop_path.hpp"

namespace qpbraid {

/// B+ edges coloured by label with co-orientation arrows, branch points,
/// optional loop with direction arrows and basepoint, and a legend.
/// Output is byte-deterministic (coordinates printed with 6 decimals).
/// Throws InputError for an empty region.
std::string render_plane_svg(const BPlusGraph& graph, const std::optional<LoopPath>& loop,
                             const BranchData& branch);

/// Strands run left to right, position 1 at the top. For sigma_k the strand
/// entering at position k + 1 passes over the one entering at k; inverse
/// letters swap the roles. Each crossing is a group with class
/// "crossing positive" or "crossing negative".
std::string render_braid_svg(const BraidWord& word);

}  // namespace qpbraid
