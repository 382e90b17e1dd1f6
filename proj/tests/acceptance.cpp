// Acceptance suite: one numbered criterion per entry, each printing a single
// pass/fail line. Run everything (no arguments) or a single criterion with
// --only N. --bregkit PATH points at the CLI binary for the end-to-end check.

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "bregkit/report.hpp"
#include "bregkit/suites.hpp"
#include "json.hpp"

using namespace bregkit;

namespace {

constexpr std::uint64_t kSeed = 42;
const std::vector<std::size_t> kDims{1, 2, 5};

std::string g_bregkit_path;

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << "    FAILED: " << what << "\n";
        }
    }
};

NormSpec l2(std::size_t dim) { return NormSpec::lp(2.0, dim); }
NormSpec l1(std::size_t dim) { return NormSpec::lp(1.0, dim); }

// catalog across dims with the ell2 entries (fixed dim 16) included once
std::vector<CatalogEntry> acceptance_catalog() {
    std::vector<CatalogEntry> out;
    for (std::size_t dim : kDims) {
        for (auto& e : standard_catalog(dim, kSeed, 8)) {
            if (e.name.rfind("ell2", 0) == 0 && dim != 2) continue;
            e.name += "/n" + std::to_string(dim);
            out.push_back(std::move(e));
        }
    }
    return out;
}

bool criterion_oracle(Check& c) {
    for (const auto& e : acceptance_catalog()) {
        const ProbeReport r = oracle_agreement_probe(e, Sampler{kSeed, 10000}, 1e-10);
        c.expect(r.pass, "oracle agreement " + e.name + " violations=" +
                             std::to_string(r.violations) +
                             " worst=" + fmt17(r.worst_margin));
    }
    return c.ok;
}

bool criterion_nonneg(Check& c) {
    for (const auto& e : acceptance_catalog()) {
        const ProbeReport r = nonnegativity_probe(e, Sampler{kSeed, 10000}, 1e-3, 1e-14);
        c.expect(r.pass, "nonnegativity " + e.name + " worst=" + fmt17(r.worst_margin));
    }
    return c.ok;
}

bool criterion_derivatives(Check& c) {
    for (const auto& e : acceptance_catalog()) {
        const ProbeReport g = fd_gradient_probe(e, Sampler{kSeed, 1000}, 1e-5);
        c.expect(g.pass, "fd gradient " + e.name + " worst=" + fmt17(g.worst_margin));
        const ProbeReport h = fd_hessian_probe(e, Sampler{kSeed, 1000}, 1e-4);
        c.expect(h.pass, "fd hessian " + e.name + " worst=" + fmt17(h.worst_margin));
    }
    return c.ok;
}

struct CertCase {
    std::string name;
    EntropyPtr spec;
    std::optional<double> floor;
};

std::vector<CertCase> cert_cases(std::size_t dim, const NormSpec& norm) {
    std::vector<CertCase> out;
    out.push_back({"bgs", make_bgs(dim, norm), {}});
    for (double q : {-1.0, 0.5, 1.5, 2.0})
        out.push_back({"hct(q=" + std::to_string(q).substr(0, 4) + ")", make_hct(q, dim, norm), {}});
    out.push_back({"hct(q=3)", make_hct(3.0, dim, norm), 0.25});
    out.push_back({"burg", make_burg(dim, norm), {}});
    out.push_back({"iterlog", make_iterated_log(dim, norm), {}});
    out.push_back({"l2lp(1.5)", make_l2lp(1.5, dim, norm), {}});
    std::vector<double> a(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) a[i * dim + i] = 1.0 + 0.25 * double(i);
    out.push_back({"quadratic", make_quadratic(a, dim, norm), {}});
    return out;
}

bool criterion_certificates(Check& c) {
    // 500 sampled pairs x the 21-point lambda grid gives 10500 (x, y, lambda)
    // triples per certificate
    const Sampler sampler{kSeed, 500};
    for (std::size_t dim : kDims) {
        for (const NormSpec& norm : {l2(dim), l1(dim)}) {
            for (const auto& cc : cert_cases(dim, norm)) {
                const auto cert = documented_strong_convexity(*cc.spec, 10.0, cc.floor);
                const ProbeReport r = strong_convexity_check(*cc.spec, cert, sampler);
                c.expect(r.pass, "certificate " + cc.name + "/" + norm.describe() + "/n" +
                                     std::to_string(dim) + " mu=" + fmt17(cert.mu) +
                                     " worst=" + fmt17(r.worst_margin));
            }
        }
    }
    // the ell2 entropy under its canonical mixed norm and under l2/l1
    for (auto [ns, pairs] : std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {0, 2},
                                                                             {2, 2}}) {
        std::vector<EntropyPtr> specs{make_ell2_type(ns, pairs)};
        specs.push_back(make_ell2_type(ns, pairs, l2(2 * pairs)));
        specs.push_back(make_ell2_type(ns, pairs, l1(2 * pairs)));
        for (const auto& s : specs) {
            const auto cert = documented_strong_convexity(*s, 3.0);
            const ProbeReport r = strong_convexity_check(*s, cert, sampler);
            c.expect(r.pass, "certificate ell2(" + std::to_string(ns) + "," +
                                 std::to_string(pairs) + ")/" + s->norm().describe() +
                                 " worst=" + fmt17(r.worst_margin));
        }
    }
    // negative controls: doubling the documented parameter must be caught.
    // This needs instances whose documented mu sits within a factor 2 of the
    // sharp constant: in one dimension l2lp's p-1 misses that (the sharp
    // one-dimensional constant is 1), so it is controlled at n=2, and the
    // ell2 entropy is controlled in its pure-l2 form where mu=4 is attained.
    const Sampler neg{kSeed, 2000};
    for (const auto& cc : cert_cases(1, l2(1))) {
        if (cc.name == "l2lp(1.5)") continue;
        auto cert = documented_strong_convexity(*cc.spec, 10.0, cc.floor);
        cert.mu *= 2.0;
        const ProbeReport r = strong_convexity_check(*cc.spec, cert, neg);
        c.expect(!r.pass, "negative control " + cc.name + "/n1 went undetected");
    }
    {
        auto spec = make_l2lp(1.5, 2, l2(2));
        auto cert = documented_strong_convexity(*spec, 10.0);
        cert.mu *= 2.0;
        c.expect(!strong_convexity_check(*spec, cert, neg).pass,
                 "negative control l2lp/n2 went undetected");
        auto e01 = make_ell2_type(0, 1);
        auto cert2 = documented_strong_convexity(*e01, 3.0);
        cert2.mu *= 2.0;
        c.expect(!strong_convexity_check(*e01, cert2, neg).pass,
                 "negative control ell2(0,1) went undetected");
    }
    return c.ok;
}

bool criterion_gauges(Check& c) {
    for (std::size_t dim : kDims) {
        std::vector<std::pair<std::string, EntropyPtr>> specs;
        specs.emplace_back("bgs", make_bgs(dim, l2(dim)));
        for (double q : {-1.0, 0.5, 1.5})
            specs.emplace_back("hct(q=" + std::to_string(q).substr(0, 4) + ")",
                               make_hct(q, dim, l2(dim)));
        specs.emplace_back("burg", make_burg(dim, l2(dim)));
        for (double x0 : {1.0, 0.1}) {
            const Vector x(dim, x0);
            for (const auto& [name, spec] : specs) {
                const auto [gauge, pair] = documented_gauge(*spec, x);
                const ProbeReport r = gauge_check(*spec, gauge, pair, Sampler{kSeed, 10000});
                c.expect(r.pass, "gauge " + name + "/n" + std::to_string(dim) + " at x=" +
                                     fmt17(x0) + " violations=" + std::to_string(r.violations));
            }
        }
    }
    return c.ok;
}

bool criterion_uc_witnesses(Check& c) {
    for (double s = 10.0; s <= 1e6 + 1; s *= 10.0) {
        const UcWitness w = uc_failure_witness(UcWitnessKind::Bgs, s, 2);
        c.expect(w.b_expected >= 1.0 / (4.0 * s) && w.b_expected <= 1.0 / s,
                 "bgs witness sandwich at s=" + fmt17(s) + " B=" + fmt17(w.b_expected));
        double d2 = 0.0;
        for (std::size_t k = 0; k < w.x.size(); ++k) d2 += (w.x[k] - w.y[k]) * (w.x[k] - w.y[k]);
        c.expect(std::fabs(std::sqrt(d2) - 1.0) < 1e-12, "bgs witness distance is 1");
    }
    for (UcWitnessKind kind : {UcWitnessKind::Burg, UcWitnessKind::IterLog}) {
        double prev = std::numeric_limits<double>::infinity();
        double last = 0.0;
        for (double s = 10.0; s <= 1e6 + 1; s *= 10.0) {
            last = uc_failure_witness(kind, s, 2).b_expected;
            c.expect(last < prev, "witness decay is monotone");
            prev = last;
        }
        c.expect(last < 1e-5, "witness below 1e-5 by s=1e6, got " + fmt17(last));
    }
    {
        const UcWitness w = uc_failure_witness(UcWitnessKind::HctHalf, 1e6, 2);
        double d2 = 0.0;
        for (std::size_t k = 0; k < w.x.size(); ++k) d2 += (w.x[k] - w.y[k]) * (w.x[k] - w.y[k]);
        c.expect(std::fabs(std::sqrt(d2) - 1e3) < 1e-6, "hct-half distance grows like sqrt(s)");
        double prev = std::numeric_limits<double>::infinity();
        for (double s = 10.0; s <= 1e6 + 1; s *= 10.0) {
            const double b = uc_failure_witness(UcWitnessKind::HctHalf, s, 2).b_expected;
            c.expect(b < prev, "hct-half witness decays");
            prev = b;
        }
        c.expect(prev < 1e-3, "hct-half witness vanishes while the pair separates");
    }
    return c.ok;
}

bool criterion_sc_witnesses(Check& c) {
    for (int k = 1; k <= 4; ++k) {
        const double eps = std::pow(10.0, -k);
        const ScWitness w = sc_failure_witness(3.0, eps, 1);
        const double bound = sc_witness_ratio_bound(3.0, eps);
        c.expect(std::fabs(w.ratio - bound) <= 1e-6 * bound,
                 "q=3 ratio formula at k=" + std::to_string(k));
        if (k == 4)
            c.expect(w.ratio < 1e-4, "q=3 ratio below 1e-4 by k=4, got " + fmt17(w.ratio));
    }
    const double near = sc_failure_witness(1.5, 1e2, 1).ratio;
    const double far = sc_failure_witness(1.5, 1e6, 1).ratio;
    c.expect(far < 1e-2 * near, "q=1.5 ratio decay: far=" + fmt17(far) + " near=" + fmt17(near));
    return c.ok;
}

bool criterion_unbounded_levelset(Check& c) {
    for (std::size_t dim : kDims) {
        const Vector x(dim, 1.0);
        const double gamma = double(dim);  // admissible: gamma > n/2
        const double t0 = hct_negq_levelset_witness(-1.0, x, gamma);
        c.expect(std::isfinite(t0), "t0 finite");
        const auto spec = make_hct(-1.0, dim, l2(dim));
        const Vector far(dim, 1e6);
        const double b = divergence_closed(*spec, x, far).value();
        c.expect(b <= gamma, "coordinates 1e6 stay in L1(x, gamma), B=" + fmt17(b));
    }
    return c.ok;
}

bool criterion_levelset_diameter(Check& c) {
    for (std::size_t dim : kDims) {
        const Vector x(dim, 1.0);
        for (double gamma : {0.1, 1.0, 10.0}) {
            for (const auto& [name, spec] :
                 std::vector<std::pair<std::string, EntropyPtr>>{
                     {"bgs", make_bgs(dim, l2(dim))}, {"burg", make_burg(dim, l2(dim))}}) {
                const LevelSetReport r = levelset_probe(*spec, x, gamma, 1000, kSeed);
                c.expect(r.report.pass, "level set " + name + "/n" + std::to_string(dim) +
                                            " gamma=" + fmt17(gamma) + " diam=" +
                                            fmt17(r.sampled_diameter) + " bound=" +
                                            fmt17(r.bound));
            }
        }
    }
    return c.ok;
}

bool criterion_three_point(Check& c) {
    for (const auto& e : acceptance_catalog()) {
        const ProbeReport r = three_point_probe(e, Sampler{kSeed, 10000}, 1e-10);
        c.expect(r.pass, "three-point " + e.name + " worst=" + fmt17(r.worst_margin));
    }
    return c.ok;
}

bool criterion_limiting_difference(Check& c) {
    Rng rng(kSeed ^ 0x11d1ff);
    for (const auto& [name, entry] : std::vector<std::pair<std::string, CatalogEntry>>{
             {"bgs", catalog_entry("bgs", 2, l2(2))},
             {"burg", catalog_entry("burg", 2, l2(2))},
             {"hct(1.5)", catalog_entry("hct", 2, l2(2), 1.5)}}) {
        for (int cfg = 0; cfg < 10; ++cfg) {
            const SetDescriptor box{entry.safe_box};
            const Vector x = sample_point(*entry.spec, box, rng);
            const Vector y = sample_point(*entry.spec, box, rng);
            Vector v(entry.spec->dim());
            double n2 = 0.0;
            for (auto& vk : v) {
                vk = rng.normal();
                n2 += vk * vk;
            }
            for (auto& vk : v) vk *= 1e-5 / std::sqrt(n2);
            const ProbeReport r = limiting_difference_probe(*entry.spec, x, y, v, 10000, 1e-6);
            c.expect(r.pass, "limiting difference " + name + " cfg " + std::to_string(cfg) +
                                 " err=" + fmt17(r.witness.size() > 1 ? r.witness[1] : -1.0));
        }
    }
    return c.ok;
}

bool criterion_combinators(Check& c) {
    for (std::size_t dim : kDims) {
        for (const auto& e : standard_catalog(dim, kSeed, 2)) {
            const ProbeReport s = scaling_combinator_probe(e, Sampler{kSeed, 1000}, 1e-12);
            c.expect(s.pass, "scaling " + e.name + "/n" + std::to_string(dim));
            const ProbeReport t = translation_combinator_probe(e, Sampler{kSeed, 1000});
            c.expect(t.pass, "translation " + e.name + "/n" + std::to_string(dim));
        }
    }
    // weighted sums split as B = sum of weighted member divergences
    const ProbeReport sum_rep = sum_combinator_probe(catalog_entry("bgs", 2, l2(2)),
                                                     catalog_entry("burg", 2, l2(2)),
                                                     Sampler{kSeed, 2000}, 1e-10);
    c.expect(sum_rep.pass, "sum combinator worst=" + fmt17(sum_rep.worst_margin));
    // direct sum: c^2 * min block parameter verifies on the product set
    const auto bgs = make_bgs(2, l2(2));
    const auto burg = make_burg(2, l2(2));
    const auto mix = direct_sum({bgs, burg}, 1.0, l2(4));
    const auto cert = documented_strong_convexity(*mix, 10.0);
    const double mu_bgs = documented_strong_convexity(*bgs, 10.0).mu;
    const double mu_burg = documented_strong_convexity(*burg, 10.0).mu;
    c.expect(std::fabs(cert.mu - std::min(mu_bgs, mu_burg)) < 1e-15, "direct-sum mu formula");
    const ProbeReport r = strong_convexity_check(*mix, cert, Sampler{kSeed, 500});
    c.expect(r.pass, "direct-sum certificate worst=" + fmt17(r.worst_margin));
    return c.ok;
}

bool criterion_blowup(Check& c) {
    struct Case {
        std::string name;
        EntropyPtr spec;
        Vector p;
        Vector v;
    };
    const std::vector<Case> cases{
        {"bgs", make_bgs(2, l2(2)), {0.0, 1.0}, {1.0, 0.0}},
        {"burg", make_burg(2, l2(2)), {0.0, 1.0}, {1.0, 0.0}},
        {"iterlog", make_iterated_log(2, l2(2)), {1.0, 2.0}, {1.0, 0.0}},
        {"hct(q=0.5)", make_hct(0.5, 2, l2(2)), {0.0, 1.0}, {1.0, 0.0}},
    };
    for (const auto& cs : cases) {
        const ProbeReport r = boundary_blowup_probe(*cs.spec, cs.p, cs.v, 1e13, 1e6);
        c.expect(r.pass, "blow-up " + cs.name + ": ||b'|| reached " + fmt17(r.witness[0]) +
                             " <= 1e6 within the schedule");
    }
    bool raised = false;
    try {
        boundary_blowup_probe(*make_hct(3.0, 2, l2(2)), {0.0, 1.0}, {1.0, 0.0});
    } catch (const NotEssentiallySmooth&) {
        raised = true;
    }
    c.expect(raised, "hct q=3 must raise NotEssentiallySmooth");
    return c.ok;
}

int run_cli(const std::string& args, std::string& out) {
    const std::string cmd = g_bregkit_path + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return -1;
    std::array<char, 4096> buf;
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    return WEXITSTATUS(pclose(pipe));
}

bool criterion_cli(Check& c) {
    if (g_bregkit_path.empty()) {
        c.expect(false, "missing --bregkit PATH");
        return c.ok;
    }
    const std::string report_path = "/tmp/bregkit_acceptance_report.json";
    std::string out;
    const int code =
        run_cli("check --suite all --seed 42 --out " + report_path + " --format json", out);
    c.expect(code == 0, "check --suite all --seed 42 exited " + std::to_string(code));
    std::ifstream f(report_path);
    c.expect(f.good(), "report file written");
    if (f.good()) {
        nlohmann::json j;
        bool parsed = true;
        try {
            f >> j;
        } catch (const nlohmann::json::exception&) {
            parsed = false;
        }
        c.expect(parsed && j.is_array() && !j.empty(), "report parses as a JSON array");
        if (parsed && j.is_array()) {
            std::string prev;
            for (const auto& item : j) {
                for (const char* field :
                     {"probe", "seed", "samples", "violations", "worst_margin", "witness",
                      "pass"})
                    c.expect(item.contains(field), std::string("report field '") + field + "'");
                const std::string probe = item.value("probe", "");
                c.expect(prev <= probe, "probe ordering is lexicographic");
                prev = probe;
                c.expect(item.value("pass", false), "probe " + probe + " passed");
            }
        }
    }
    const std::string cfg_path = "/tmp/bregkit_corrupted_mu.json";
    {
        std::ofstream cfg(cfg_path);
        cfg << R"({"entropy": "bgs", "dim": 1, "suite": "sc", "seed": 42, "samples": 3000,)"
            << R"( "mu_scale": 2.0, "out": "/tmp/bregkit_corrupt_report.json"})";
    }
    std::string out2;
    const int code2 = run_cli("check --config " + cfg_path, out2);
    c.expect(code2 == 1, "corrupted-mu config exited " + std::to_string(code2) + ", want 1");
    return c.ok;
}

struct Criterion {
    int id;
    std::string name;
    std::function<bool(Check&)> fn;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> list = {
        {1, "oracle-agreement", criterion_oracle},
        {2, "nonnegativity-and-identity", criterion_nonneg},
        {3, "derivative-consistency", criterion_derivatives},
        {4, "strong-convexity-certificates", criterion_certificates},
        {5, "relative-gauges", criterion_gauges},
        {6, "no-uc-witnesses", criterion_uc_witnesses},
        {7, "no-sc-witnesses", criterion_sc_witnesses},
        {8, "unbounded-level-set", criterion_unbounded_levelset},
        {9, "level-set-diameter-bound", criterion_levelset_diameter},
        {10, "three-point-identity", criterion_three_point},
        {11, "limiting-difference", criterion_limiting_difference},
        {12, "combinators", criterion_combinators},
        {13, "boundary-blow-up", criterion_blowup},
        {14, "cli-end-to-end", criterion_cli},
    };
    return list;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
        if (arg == "--bregkit" && i + 1 < argc) g_bregkit_path = argv[++i];
    }
    int failures = 0;
    for (const auto& crit : criteria()) {
        if (only != 0 && crit.id != only) continue;
        Check check;
        bool ok = false;
        try {
            ok = crit.fn(check);
        } catch (const std::exception& e) {
            check.detail << "    EXCEPTION: " << e.what() << "\n";
            ok = false;
        }
        std::printf("criterion %02d %-32s %s\n", crit.id, crit.name.c_str(),
                    ok ? "PASS" : "FAIL");
        if (!ok) {
            std::fputs(check.detail.str().c_str(), stdout);
            ++failures;
        }
    }
    return failures;
}
