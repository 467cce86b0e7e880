#pragma once

#include <string>

#include "evonas/genome.hpp"
#include "evonas/run_history.hpp"

namespace evonas {

/// Renders a candidate as a per-layer listing: one line per potential conv
/// and dense layer (inactive ones included) with every gene field and the
/// layer's count, preceded by a fitness line. Doubles print with full
/// precision so the text parses back to the identical candidate.
std::string format_candidate_listing(const Candidate& c);

/// Inverse of format_candidate_listing. Ignores lines that are not part of
/// the listing (so the full `report` command output parses too). Throws
/// std::runtime_error on malformed or missing layer lines.
Candidate parse_candidate_listing(const std::string& text);

/// The `report --run DIR` body: run totals plus the best candidate's
/// listing. Throws when the directory holds no history.
std::string format_run_report(const RunHistory& hist);

}  // namespace evonas
