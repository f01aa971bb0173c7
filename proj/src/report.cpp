#include "bayestree/report.hpp"

#include <cmath>
#include <cstdio>

namespace bayestree {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json json_of(const LogValue& v) {
    if (v.is_divergent())
        return {{"divergent", true}, {"scaled_log", v.scaled_log()}};
    if (v.is_zero()) return nullptr;  // the engine never emits a zero evidence
    return v.log();
}

nlohmann::json json_of(const ScalarOrDivergent& v) {
    if (v.divergent) return {{"divergent", true}};
    return v.value;
}

nlohmann::json json_of(const DivergenceClass& c) {
    nlohmann::json arr = nlohmann::json::array();
    for (const HeavyPoint& h : c.heavy)
        arr.push_back({{"value", h.value}, {"multiplicity", h.multiplicity}});
    return arr;
}

nlohmann::json json_of(const InferenceResult& r, bool with_height) {
    nlohmann::json j;
    j["log_evidence"] = json_of(r.log_evidence);
    j["split_prob_root"] = r.split_prob_root;
    if (with_height) j["height_at_x"] = json_of(*r.height_at_x);
    j["avg_height"] = json_of(r.avg_height);
    j["dim_dist"] = r.dim_dist;
    j["dim_tail"] = r.dim_tail;
    j["recursion_count"] = r.recursion_count;
    j["divergent"] = r.log_evidence.is_divergent();
    j["divergence_class"] = json_of(r.div_class);
    return j;
}

std::string csv_of(const LogValue& v) {
    if (v.is_divergent()) return "inf";
    if (v.is_zero()) return "-inf";
    return format_double(v.log());
}

std::string csv_of(const ScalarOrDivergent& v) {
    if (v.divergent) return "inf";
    return format_double(v.value);
}

std::string csv_of(const DivergenceClass& c) {
    std::string out;
    for (const HeavyPoint& h : c.heavy) {
        if (!out.empty()) out += ';';
        out += format_double(h.value);
        out += '*';
        out += std::to_string(h.multiplicity);
    }
    return out;
}

std::string csv_of(const InferenceResult& r, bool with_height) {
    std::string head = "log_evidence,split_prob_root";
    if (with_height) head += ",height_at_x";
    head += ",avg_height,dim_dist,dim_tail,recursion_count,divergent,divergence_class\n";

    std::string row = csv_of(r.log_evidence);
    row += ',';
    row += format_double(r.split_prob_root);
    if (with_height) {
        row += ',';
        row += csv_of(*r.height_at_x);
    }
    row += ',';
    row += csv_of(r.avg_height);
    row += ',';
    std::string dims;
    for (double d : r.dim_dist) {
        if (!dims.empty()) dims += ';';
        dims += format_double(d);
    }
    row += dims;
    row += ',';
    row += format_double(r.dim_tail);
    row += ',';
    row += std::to_string(r.recursion_count);
    row += ',';
    row += r.log_evidence.is_divergent() ? "true" : "false";
    row += ',';
    row += csv_of(r.div_class);
    row += '\n';
    return head + row;
}

}  // namespace bayestree
