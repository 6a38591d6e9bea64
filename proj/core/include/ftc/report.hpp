#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ftc/classify.hpp"

namespace ftc {

void write_pattern_report(std::ostream& out, const PatternReport& r);
void write_analysis_text(std::ostream& out, const std::vector<PatternReport>& reports);
std::string analysis_json(const std::vector<PatternReport>& reports);

void write_classification_text(std::ostream& out, const ClassificationReport& rep);
std::string classification_json(const ClassificationReport& rep);

}  // namespace ftc
