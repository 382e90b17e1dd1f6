#include "bregkit/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace bregkit {

std::string fmt17(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void sort_reports(std::vector<ProbeReport>& reports) {
    std::stable_sort(reports.begin(), reports.end(),
                     [](const ProbeReport& a, const ProbeReport& b) { return a.probe < b.probe; });
}

nlohmann::json to_json(const ProbeReport& r) {
    nlohmann::json j;
    j["probe"] = r.probe;
    j["seed"] = r.seed;
    j["samples"] = r.samples;
    j["violations"] = r.violations;
    if (std::isinf(r.worst_margin))
        j["worst_margin"] = fmt17(r.worst_margin);
    else
        j["worst_margin"] = nlohmann::json::parse(fmt17(r.worst_margin));
    nlohmann::json w = nlohmann::json::array();
    for (double v : r.witness) {
        if (std::isinf(v))
            w.push_back(fmt17(v));
        else
            w.push_back(nlohmann::json::parse(fmt17(v)));
    }
    j["witness"] = std::move(w);
    j["pass"] = r.pass;
    return j;
}

}  // namespace

std::string reports_to_json(std::vector<ProbeReport> reports) {
    sort_reports(reports);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : reports) arr.push_back(to_json(r));
    return arr.dump(2) + "\n";
}

std::string reports_to_csv(std::vector<ProbeReport> reports) {
    sort_reports(reports);
    std::ostringstream os;
    os << "probe,seed,samples,violations,worst_margin,witness,pass\n";
    for (const auto& r : reports) {
        os << r.probe << ',' << r.seed << ',' << r.samples << ',' << r.violations << ','
           << fmt17(r.worst_margin) << ',';
        for (std::size_t i = 0; i < r.witness.size(); ++i) {
            if (i) os << ';';
            os << fmt17(r.witness[i]);
        }
        os << ',' << (r.pass ? "true" : "false") << '\n';
    }
    return os.str();
}

}  // namespace bregkit
