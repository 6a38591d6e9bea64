#include "ftc/report.hpp"

#include <cmath>
#include <ostream>

#include "json.hpp"

namespace ftc {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

uint64_t den_log(const HausdorffDim& h) {
  uint64_t d = 1;
  for (int i = 1; i < h.depth; ++i) d *= static_cast<uint64_t>(h.d);
  return d;
}

}  // namespace

void write_pattern_report(std::ostream& out, const PatternReport& r) {
  out << "pattern " << r.index << "\n";
  out << "order = " << r.order << "\n";
  out << "finiteness = " << (r.finite ? "Finite" : "Infinite") << "\n";
  if (r.finite) out << "iso = " << r.finite_label << "\n";
  out << "hausdorff_num = " << r.hausdorff.st_order << "\n";
  out << "hausdorff_den_log = " << den_log(r.hausdorff) << "\n";
  out << "hausdorff = " << fmt_double(r.hausdorff.value) << "\n";
  if (r.hausdorff.exact)
    out << "hausdorff_exact = " << r.hausdorff.num << "/" << r.hausdorff.den
        << (r.hausdorff.relative ? " (relative)" : "") << "\n";
  if (!r.finite) {
    out << "tfg = " << r.tfg.str() << "\n";
    out << "ji = " << r.ji.str() << "\n";
  }
  out << "fractality = " << fractality_name(r.fractality) << "\n";
  out << "level_transitive = " << r.lt.str() << "\n";
  out << "ktilde_index = " << r.ktilde_index << "\n";
  out << "ktilde_normal = " << (r.ktilde_normal ? "true" : "false") << "\n";
  if (!r.finite) out << "rigidity = " << r.rigidity.str() << "\n";
  out << "end\n";
}

void write_analysis_text(std::ostream& out, const std::vector<PatternReport>& reports) {
  for (const PatternReport& r : reports) write_pattern_report(out, r);
}

namespace {

nlohmann::json report_json(const PatternReport& r) {
  nlohmann::json j;
  j["pattern"] = r.index;
  j["order"] = r.order;
  j["finiteness"] = r.finite ? "Finite" : "Infinite";
  if (r.finite) j["iso"] = r.finite_label;
  j["hausdorff_num"] = r.hausdorff.st_order;
  j["hausdorff_den_log"] = den_log(r.hausdorff);
  j["hausdorff"] = r.hausdorff.value;
  if (r.hausdorff.exact) {
    j["hausdorff_exact"] = std::to_string(r.hausdorff.num) + "/" + std::to_string(r.hausdorff.den);
    j["hausdorff_relative"] = r.hausdorff.relative;
  }
  if (!r.finite) {
    j["tfg"] = r.tfg.str();
    j["ji"] = r.ji.str();
    j["ji_indices"] = r.ji.indices;
    j["rigidity"] = r.rigidity.str();
  }
  j["fractality"] = fractality_name(r.fractality);
  j["level_transitive"] = r.lt.str();
  j["ktilde_order"] = r.ktilde_order;
  j["ktilde_index"] = r.ktilde_index;
  j["ktilde_normal"] = r.ktilde_normal;
  j["p_group"] = r.p_group;
  if (r.p_group && r.p) j["p"] = r.p;
  return j;
}

}  // namespace

std::string analysis_json(const std::vector<PatternReport>& reports) {
  nlohmann::json j = nlohmann::json::array();
  for (const PatternReport& r : reports) j.push_back(report_json(r));
  return j.dump(2) + "\n";
}

void write_classification_text(std::ostream& out, const ClassificationReport& rep) {
  out << "classes: " << rep.upper << " (lower=" << rep.lower << " upper=" << rep.upper
      << ")\n";
  out << "classes = " << rep.upper << "\n";
  out << "lower_bound = " << rep.lower << "\n";
  out << "upper_bound = " << rep.upper << "\n";
  out << "finite_classes = " << rep.finite_classes.size() << "\n";
  for (size_t c = 0; c < rep.finite_classes.size(); ++c) {
    out << "finite_class " << c << " = " << rep.finite_classes[c].label << " [";
    for (size_t i = 0; i < rep.finite_classes[c].members.size(); ++i)
      out << (i ? " " : "") << rep.finite_classes[c].members[i];
    out << "]\n";
  }
  out << "infinite_classes = " << rep.infinite_classes.size() << "\n";
  for (size_t c = 0; c < rep.infinite_classes.size(); ++c) {
    const auto& cls = rep.infinite_classes[c];
    out << "infinite_class " << c << " = [";
    for (size_t i = 0; i < cls.members.size(); ++i) out << (i ? " " : "") << cls.members[i];
    out << "] rigid=" << (cls.has_rigid ? "yes" : "no")
        << " pro_p=" << (cls.pro_p ? "yes" : "no") << "\n";
  }
  out << "end\n";
}

std::string classification_json(const ClassificationReport& rep) {
  nlohmann::json j;
  j["classes"] = rep.upper;
  j["lower_bound"] = rep.lower;
  j["upper_bound"] = rep.upper;
  j["restricted_tfg"] = rep.restricted_tfg;
  j["finite_classes"] = nlohmann::json::array();
  for (const auto& c : rep.finite_classes)
    j["finite_classes"].push_back({{"label", c.label}, {"members", c.members}});
  j["infinite_classes"] = nlohmann::json::array();
  for (const auto& c : rep.infinite_classes)
    j["infinite_classes"].push_back(
        {{"members", c.members}, {"rigid", c.has_rigid}, {"pro_p", c.pro_p}});
  j["patterns"] = nlohmann::json::array();
  for (const PatternReport& r : rep.reports) j["patterns"].push_back(report_json(r));
  return j.dump(2) + "\n";
}

}  // namespace ftc
