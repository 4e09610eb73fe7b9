#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wgt/checks.hpp"
#include "wgt/dn_map.hpp"
#include "wgt/fourier.hpp"
#include "wgt/phantoms.hpp"
#include "wgt/reconstruct.hpp"
#include "wgt/solver.hpp"
#include "wgt/stability.hpp"
#include "wgt/xray.hpp"

namespace py = pybind11;
using namespace wgt;

namespace {

Image2D image_from_numpy(py::array_t<double, py::array::c_style | py::array::forcecast> arr,
                         double h, std::pair<double, double> origin) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected a 2D array");
    Image2D img(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)), h,
                {origin.first, origin.second});
    std::memcpy(img.data.data(), arr.data(), sizeof(double) * arr.size());
    return img;
}

py::array_t<double> numpy_from_image(const Image2D& img) {
    py::array_t<double> out({img.n0(), img.n1()});
    std::memcpy(out.mutable_data(), img.data.data(), sizeof(double) * img.data.size());
    return out;
}

PhantomSpec phantom_from_dict(const py::dict& d) {
    PhantomSpec s;
    if (d.contains("family")) s.family = d["family"].cast<std::string>();
    if (d.contains("amplitude")) s.amplitude = d["amplitude"].cast<double>();
    if (d.contains("center_x")) s.center.x = d["center_x"].cast<double>();
    if (d.contains("center_y")) s.center.y = d["center_y"].cast<double>();
    if (d.contains("center_z")) s.center_z = d["center_z"].cast<double>();
    if (d.contains("width")) s.width = d["width"].cast<double>();
    if (d.contains("width_z")) s.width_z = d["width_z"].cast<double>();
    if (d.contains("alpha")) s.alpha = d["alpha"].cast<double>();
    if (d.contains("M")) s.M = d["M"].cast<double>();
    if (d.contains("r_support")) s.r_support = d["r_support"].cast<double>();
    return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "waveguide potential tomography core";

    py::class_<WaveguideGrid>(m, "WaveguideGrid")
        .def_readonly("nx", &WaveguideGrid::nx)
        .def_readonly("ny", &WaveguideGrid::ny)
        .def_readonly("nz", &WaveguideGrid::nz)
        .def_readonly("nt", &WaveguideGrid::nt)
        .def_readonly("dt", &WaveguideGrid::dt)
        .def_readonly("T", &WaveguideGrid::T)
        .def_readonly("X_cap", &WaveguideGrid::X_cap)
        .def_readonly("epsilon", &WaveguideGrid::epsilon)
        .def("cfl_number", &WaveguideGrid::cfl_number);

    py::class_<PotentialField>(m, "PotentialField")
        .def_readonly("alpha", &PotentialField::alpha)
        .def_readonly("M", &PotentialField::M)
        .def_readonly("r_support", &PotentialField::r_support)
        .def("sup_norm", &PotentialField::sup_norm);

    py::class_<GOProbe>(m, "GOProbe")
        .def_readonly("rho", &GOProbe::rho)
        .def_readonly("delta", &GOProbe::delta)
        .def_readonly("y3", &GOProbe::y3)
        .def_readonly("dir", &GOProbe::dir)
        .def_readonly("zero_line", &GOProbe::zero_line)
        .def("id", &GOProbe::id);

    m.def(
        "build_grid",
        [](const std::string& kind, double size_x, double size_y, int nx, int ny, int nz, double T,
           double r_support) {
            const CrossSection cs = kind == "disk" ? CrossSection::make_disk(size_x)
                                                   : CrossSection::make_rectangle(size_x, size_y);
            return build_grid(cs, nx, ny, nz, T, r_support);
        },
        py::arg("kind"), py::arg("size_x"), py::arg("size_y"), py::arg("nx"), py::arg("ny"),
        py::arg("nz"), py::arg("T"), py::arg("r_support"));

    m.def("make_phantom", [](const WaveguideGrid& g, const py::dict& d) {
        return make_phantom(g, phantom_from_dict(d));
    });

    m.def("exponent_kappa", &exponent_kappa, py::arg("alpha"));

    m.def("schedule", [](double alpha, double delta_star) {
        const StabilitySchedule s = make_schedule(alpha, delta_star);
        py::dict d;
        d["alpha"] = s.alpha;
        d["alpha_tilde"] = s.alpha_tilde;
        d["mu"] = s.mu;
        d["kappa"] = s.kappa;
        d["delta_star"] = s.delta_star;
        d["gamma_star"] = s.gamma_star;
        return d;
    });

    m.def("schedule_rho", [](double alpha, double delta_star, double gamma) {
        return make_schedule(alpha, delta_star).rho_of_gamma(gamma);
    });
    m.def("schedule_delta", [](double alpha, double delta_star, double gamma) {
        return make_schedule(alpha, delta_star).delta_of_gamma(gamma);
    });

    m.def(
        "xray_forward",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> img, double h,
           std::pair<double, double> origin, std::vector<double> angles,
           std::vector<double> offsets) {
            const SliceSinogram sg = xray_forward(image_from_numpy(img, h, origin), angles, offsets);
            py::array_t<double> out({sg.angles.size(), sg.offsets.size()});
            std::memcpy(out.mutable_data(), sg.data.data(), sizeof(double) * sg.data.size());
            return out;
        },
        py::arg("img"), py::arg("h"), py::arg("origin"), py::arg("angles"), py::arg("offsets"));

    m.def(
        "fbp_invert",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> sino,
           std::vector<double> angles, std::vector<double> offsets, int n, double half_extent,
           bool apodize) {
            SliceSinogram sg;
            sg.angles = std::move(angles);
            sg.offsets = std::move(offsets);
            sg.data = Array2D<double>(sg.angles.size(), sg.offsets.size());
            std::memcpy(sg.data.data(), sino.data(), sizeof(double) * sg.data.size());
            FBPOptions opt;
            opt.apodize = apodize;
            return numpy_from_image(fbp_invert(sg, Image2D::centered_square(n, half_extent), opt));
        },
        py::arg("sino"), py::arg("angles"), py::arg("offsets"), py::arg("n"),
        py::arg("half_extent"), py::arg("apodize") = false);

    m.def(
        "frac_sobolev_norm",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> img, double h, double s) {
            return frac_sobolev_norm(image_from_numpy(img, h, {0, 0}), s);
        },
        py::arg("img"), py::arg("h"), py::arg("s"));

    m.def(
        "place_probes",
        [](const WaveguideGrid& g, int angles, int offsets, int slices, double delta, double rho) {
            ProbeDictionarySpec spec;
            spec.angles = angles;
            spec.offsets = offsets;
            spec.slices = slices;
            spec.delta = delta;
            spec.rho = rho;
            return place_probes(g, spec);
        },
        py::arg("grid"), py::arg("angles"), py::arg("offsets"), py::arg("slices"),
        py::arg("delta"), py::arg("rho"));

    m.def(
        "dn_gap",
        [](const WaveguideGrid& g, const PotentialField& q1, const PotentialField& q2,
           const std::vector<GOProbe>& probes, int workers) {
            DNGapOptions opt;
            opt.workers = workers;
            const DNGapEstimate est = dn_gap(g, q1, q2, probes, opt);
            py::dict d;
            d["gamma_hat"] = est.gamma_hat;
            std::vector<double> ratios;
            for (const auto& r : est.per_probe) ratios.push_back(r.ratio);
            d["ratios"] = ratios;
            return d;
        },
        py::arg("grid"), py::arg("q1"), py::arg("q2"), py::arg("probes"), py::arg("workers") = 1);

    m.def(
        "correlate",
        [](const WaveguideGrid& g, const PotentialField& q1, const PotentialField& q2,
           const GOProbe& p, bool with_oracle) {
            CorrelateOptions opt;
            opt.with_oracle = with_oracle;
            const CorrelationDatum d = correlate(g, q1, q2, p, opt);
            py::dict out;
            out["value"] = std::complex<double>(d.value_re, d.value_im);
            out["xray_estimate"] = d.xray_estimate;
            if (d.oracle) out["oracle"] = *d.oracle;
            return out;
        },
        py::arg("grid"), py::arg("q1"), py::arg("q2"), py::arg("probe"),
        py::arg("with_oracle") = false);

    m.def(
        "mollify_slices",
        [](const WaveguideGrid& g, const PotentialField& q, double delta, int n,
           double half_extent, std::vector<double> slices) {
            const auto imgs = mollify_R(g, q, delta, Image2D::centered_square(n, half_extent),
                                        slices, MollifyMode::fine);
            py::list out;
            for (const auto& im : imgs) out.append(numpy_from_image(im));
            return out;
        },
        py::arg("grid"), py::arg("q"), py::arg("delta"), py::arg("n"), py::arg("half_extent"),
        py::arg("slices"));

    m.attr("__version__") = "0.1.0";
}
