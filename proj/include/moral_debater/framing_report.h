#pragma once

#include <array>
#include <map>
#include <span>
#include <string>

#include "moral_debater/foundation.h"
#include "moral_debater/narrative.h"
#include "moral_debater/scorer.h"

namespace moral_debater {

using FoundationShares = std::array<double, kFoundationCount>;

// Summed scorer mass per foundation over every sentence of the arguments.
FoundationShares moral_mass(std::span<const MoralArgument> arguments, const MoralScorer& scorer);

// Rows keyed by framing name ("custom" for explicit moral sets), each
// normalized to 100. A row without any moral mass stays all zero.
std::map<std::string, FoundationShares> framing_moral_distribution(
    std::span<const MoralArgument> arguments, const MoralScorer& scorer);

std::string format_distribution_table(const std::map<std::string, FoundationShares>& rows);

}  // namespace moral_debater
