#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bregkit/analysis.hpp"
#include "bregkit/report.hpp"
#include "bregkit/suites.hpp"

namespace py = pybind11;
using namespace bregkit;

namespace {

// pybind-friendly handle around the immutable spec
struct PySpec {
    EntropyPtr ptr;
    std::size_t dim() const { return ptr->dim(); }
    std::string describe() const { return ptr->describe(); }
};

NormSpec norm_from_string(const std::string& text, std::size_t dim) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (head == "lp")
        return NormSpec::lp(tail == "inf" ? std::numeric_limits<double>::infinity()
                                          : std::stod(tail),
                            dim);
    if (head == "mixed") return NormSpec::mixed_l1_l2(std::stoul(tail), dim);
    throw InvalidSpec("norm: expected lp:P or mixed:K");
}

py::dict report_to_dict(const ProbeReport& r) {
    py::dict d;
    d["probe"] = r.probe;
    d["seed"] = r.seed;
    d["samples"] = r.samples;
    d["violations"] = r.violations;
    d["worst_margin"] = r.worst_margin;
    d["witness"] = r.witness;
    d["pass"] = r.pass;
    return d;
}

}  // namespace

PYBIND11_MODULE(_bregkit, m) {
    m.doc() = "Bregman function catalog and divergence verification toolkit";

    // translators run newest-first, so the base class goes in first
    py::register_exception<BregkitError>(m, "BregkitError");
    py::register_exception<NotInInterior>(m, "NotInInterior");
    py::register_exception<NoDocumentedParameter>(m, "NoDocumentedParameter");
    py::register_exception<NoDocumentedGauge>(m, "NoDocumentedGauge");
    py::register_exception<NotEssentiallySmooth>(m, "NotEssentiallySmooth");

    py::class_<PySpec>(m, "EntropySpec")
        .def_property_readonly("dim", &PySpec::dim)
        .def("__repr__", [](const PySpec& s) { return "<EntropySpec " + s.describe() + ">"; });

    m.def("bgs", [](std::size_t dim, const std::string& norm) {
        return PySpec{make_bgs(dim, norm_from_string(norm, dim))};
    }, py::arg("dim"), py::arg("norm") = "lp:2");
    m.def("hct", [](double q, std::size_t dim, const std::string& norm) {
        return PySpec{make_hct(q, dim, norm_from_string(norm, dim))};
    }, py::arg("q"), py::arg("dim"), py::arg("norm") = "lp:2");
    m.def("burg", [](std::size_t dim, const std::string& norm) {
        return PySpec{make_burg(dim, norm_from_string(norm, dim))};
    }, py::arg("dim"), py::arg("norm") = "lp:2");
    m.def("iterated_log", [](std::size_t dim, const std::string& norm) {
        return PySpec{make_iterated_log(dim, norm_from_string(norm, dim))};
    }, py::arg("dim"), py::arg("norm") = "lp:2");
    m.def("beta_entropy", [](double beta, std::size_t dim, const std::string& norm) {
        return PySpec{make_beta(beta, dim, norm_from_string(norm, dim))};
    }, py::arg("beta"), py::arg("dim"), py::arg("norm") = "lp:2");
    m.def("alpha_beta", [](double alpha, double beta, std::size_t dim, const std::string& norm) {
        return PySpec{make_alpha_beta(alpha, beta, dim, norm_from_string(norm, dim))};
    }, py::arg("alpha"), py::arg("beta"), py::arg("dim"), py::arg("norm") = "lp:2");
    m.def("l2lp", [](double p, std::size_t dim, const std::string& norm) {
        return PySpec{make_l2lp(p, dim, norm_from_string(norm, dim))};
    }, py::arg("p"), py::arg("dim"), py::arg("norm") = "lp:2");
    m.def("quadratic", [](std::vector<double> a, std::size_t dim, const std::string& norm) {
        return PySpec{make_quadratic(std::move(a), dim, norm_from_string(norm, dim))};
    }, py::arg("a"), py::arg("dim"), py::arg("norm") = "lp:2");
    m.def("ell2_type", [](std::size_t n_split, std::size_t pairs) {
        return PySpec{make_ell2_type(n_split, pairs)};
    }, py::arg("n_split"), py::arg("pairs"));

    m.def("scale_plus_linear", [](const PySpec& s, double lambda, const Vector& ell) {
        return PySpec{scale_plus_linear(s.ptr, lambda, ell)};
    }, py::arg("spec"), py::arg("lambda_"), py::arg("ell") = Vector{});
    m.def("translate", [](const PySpec& s, const Vector& z0) {
        return PySpec{translate(s.ptr, z0)};
    });
    m.def("sum_of", [](const std::vector<std::pair<double, PySpec>>& terms) {
        std::vector<std::pair<double, EntropyPtr>> t;
        for (const auto& [w, s] : terms) t.emplace_back(w, s.ptr);
        return PySpec{sum_of(t)};
    });
    m.def("direct_sum", [](const std::vector<PySpec>& blocks, double c, const std::string& norm) {
        std::vector<EntropyPtr> b;
        std::size_t dim = 0;
        for (const auto& s : blocks) {
            b.push_back(s.ptr);
            dim += s.ptr->dim();
        }
        return PySpec{direct_sum(b, c, norm_from_string(norm, dim))};
    }, py::arg("blocks"), py::arg("c"), py::arg("norm") = "lp:2");

    m.def("classify", [](const PySpec& s, const Vector& x) {
        return std::string(to_string(classify(*s.ptr, x)));
    });
    m.def("value", [](const PySpec& s, const Vector& x) { return value(*s.ptr, x).as_double(); });
    m.def("grad", [](const PySpec& s, const Vector& x) { return grad(*s.ptr, x); });
    m.def("hessian_quadform", [](const PySpec& s, const Vector& x, const Vector& w) {
        return hessian_quadform(*s.ptr, x, w);
    });
    m.def("divergence", [](const PySpec& s, const Vector& x, const Vector& y) {
        return divergence_closed(*s.ptr, x, y).as_double();
    });
    m.def("divergence_generic", [](const PySpec& s, const Vector& x, const Vector& y) {
        return divergence_generic(*s.ptr, x, y).as_double();
    });
    m.def("three_point_residual", [](const PySpec& s, const Vector& x, const Vector& y,
                                     const Vector& z) {
        return three_point_residual(*s.ptr, x, y, z);
    });

    m.def("metadata", [](const PySpec& s) {
        const EntropyMetadata md = metadata(*s.ptr);
        py::dict d;
        d["essentially_smooth"] = md.essentially_smooth;
        d["legendre"] = md.legendre;
        d["dom_closed"] = md.dom_closed;
        d["zone_all_space"] = md.zone_all_space;
        d["zone_lower"] = md.zone_lower;
        return d;
    });
    m.def("documented_strong_convexity", [](const PySpec& s, double m_s,
                                            std::optional<double> eps_floor) {
        const auto cert = documented_strong_convexity(*s.ptr, m_s, eps_floor);
        py::dict d;
        d["mu"] = cert.mu;
        d["provenance"] = cert.provenance;
        return d;
    }, py::arg("spec"), py::arg("m_s"), py::arg("eps_floor") = py::none());
    m.def("documented_gauge", [](const PySpec& s, const Vector& x) {
        const auto [g, pd] = documented_gauge(*s.ptr, x);
        py::dict d;
        d["gauge"] = g.describe();
        d["r"] = std::get<ZoneAnnulus>(pd.s2.region).r;
        return d;
    });
    m.def("burg_rx", [](const Vector& x, std::size_t dim, const std::string& norm) {
        return burg_rx(x, norm_from_string(norm, dim));
    }, py::arg("x"), py::arg("dim"), py::arg("norm") = "lp:2");

    m.def("uc_failure_witness", [](const std::string& kind, double s, std::size_t dim) {
        UcWitnessKind k;
        if (kind == "bgs") k = UcWitnessKind::Bgs;
        else if (kind == "hct-half") k = UcWitnessKind::HctHalf;
        else if (kind == "burg") k = UcWitnessKind::Burg;
        else if (kind == "iterlog") k = UcWitnessKind::IterLog;
        else throw InvalidSpec("kind must be bgs|hct-half|burg|iterlog");
        const UcWitness w = uc_failure_witness(k, s, dim);
        return py::make_tuple(w.x, w.y, w.b_expected);
    });
    m.def("sc_failure_witness", [](double q, double param, std::size_t dim) {
        const ScWitness w = sc_failure_witness(q, param, dim);
        return py::make_tuple(w.x, w.y, w.ratio);
    });
    m.def("hct_negq_levelset_witness", &hct_negq_levelset_witness);

    m.def("gauge_check", [](const PySpec& s, const Vector& x, std::uint64_t seed,
                            std::size_t count) {
        const auto [g, pd] = documented_gauge(*s.ptr, x);
        return report_to_dict(gauge_check(*s.ptr, g, pd, Sampler{seed, count}));
    }, py::arg("spec"), py::arg("x"), py::arg("seed") = 42, py::arg("count") = 1000);
    m.def("strong_convexity_check", [](const PySpec& s, double m_s, std::uint64_t seed,
                                       std::size_t count, double mu_scale,
                                       std::optional<double> eps_floor) {
        StrongConvexityCertificate cert = documented_strong_convexity(*s.ptr, m_s, eps_floor);
        cert.mu *= mu_scale;
        return report_to_dict(strong_convexity_check(*s.ptr, cert, Sampler{seed, count}));
    }, py::arg("spec"), py::arg("m_s"), py::arg("seed") = 42, py::arg("count") = 1000,
       py::arg("mu_scale") = 1.0, py::arg("eps_floor") = py::none());
    m.def("levelset_probe", [](const PySpec& s, const Vector& x, double gamma,
                               std::size_t directions, std::uint64_t seed) {
        const LevelSetReport r = levelset_probe(*s.ptr, x, gamma, directions, seed);
        py::dict d;
        d["sampled_diameter"] = r.sampled_diameter;
        d["bound"] = r.bound;
        d["pass"] = r.report.pass;
        return d;
    }, py::arg("spec"), py::arg("x"), py::arg("gamma"), py::arg("directions") = 128,
       py::arg("seed") = 42);
}
