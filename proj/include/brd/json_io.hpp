#pragma once

#include <string>

#include "brd/degrees.hpp"
#include "brd/experiments.hpp"

namespace brd {

std::string to_json(const DegreeResult& r);
std::string to_json(const SfapResult& r, const ClassSpec& cls);
std::string to_json(const DemandReport& r);
std::string to_json(const ExperimentReport& r);
std::string to_json(const DiagonalReport& r);
std::string tree_to_json(const CodingTree& tree);

std::string to_table(const DegreeResult& r);
std::string to_table(const ExperimentReport& r);

}  // namespace brd
