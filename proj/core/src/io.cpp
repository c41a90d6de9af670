#include "ccsim/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ccsim/errors.hpp"
#include "ccsim/experiments.hpp"

namespace ccsim {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    out.close();
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_steady_csv(const SteadyProfile& s, const std::string& path) {
    std::ostringstream os;
    os << "x,u,q1,q2,u0\n";
    for (int i = 0; i < s.grid.n; ++i)
        os << fmt17(s.grid.x(i)) << ',' << fmt17(s.u[i]) << ',' << fmt17(s.q1[i]) << ','
           << fmt17(s.q2[i]) << ',' << fmt17(s.u0[i]) << '\n';
    write_text_file(path, os.str());
}

void write_eigen_csv(const EigenPair& pair, const std::string& path) {
    std::ostringstream os;
    os << "x,U1,U2,Q1,Q2,U0,ph1,ph2,phi1,phi2,ph0\n";
    const auto& d = pair.direct;
    const auto& u = pair.dual;
    for (int i = 0; i < pair.grid.n; ++i)
        os << fmt17(pair.grid.x(i)) << ',' << fmt17(d.U1[i]) << ',' << fmt17(d.U2[i]) << ','
           << fmt17(d.Q1[i]) << ',' << fmt17(d.Q2[i]) << ',' << fmt17(d.U0[i]) << ','
           << fmt17(u.ph1[i]) << ',' << fmt17(u.ph2[i]) << ',' << fmt17(u.phi1[i]) << ','
           << fmt17(u.phi2[i]) << ',' << fmt17(u.ph0[i]) << '\n';
    write_text_file(path, os.str());
}

std::string eigen_summary_json(const EigenPair& pair, const EigenCertificates& cert) {
    std::ostringstream os;
    os << "{\"lambda\": " << fmt17(pair.root.lambda)
       << ", \"lambda_minus\": " << fmt17(pair.root.lambda_minus)
       << ", \"F_residual\": " << fmt17(cert.F_residual)
       << ", \"min_ph0_minus_phi2\": " << fmt17(cert.min_ph0_minus_phi2) << "}";
    return os.str();
}

void write_trajectory_csv(const DecayReport& r, const std::string& path) {
    std::ostringstream os;
    os << "t,M,mass_total,ub\n";
    for (std::size_t i = 0; i < r.times.size(); ++i)
        os << fmt17(r.times[i]) << ',' << fmt17(r.M[i]) << ',' << fmt17(r.mass[i]) << ','
           << fmt17(r.ub[i]) << '\n';
    write_text_file(path, os.str());
}

void write_snapshot_csv(const TransientState& s, const std::string& path) {
    std::ostringstream os;
    os << "x,u1,u2,q1,q2,u0\n";
    for (int i = 0; i < s.grid.n; ++i)
        os << fmt17(s.grid.x(i)) << ',' << fmt17(s.u1[i]) << ',' << fmt17(s.u2[i]) << ','
           << fmt17(s.q1[i]) << ',' << fmt17(s.q2[i]) << ',' << fmt17(s.u0[i]) << '\n';
    write_text_file(path, os.str());
}

void write_fic_curve_csv(const std::vector<FicPoint>& pts, const std::string& path) {
    std::ostringstream os;
    os << "P,FIC\n";
    for (const auto& p : pts) os << fmt17(p.P) << ',' << fmt17(p.fic) << '\n';
    write_text_file(path, os.str());
}

void write_fic_grid_csv(const FicGrid& g, const std::string& path) {
    std::ostringstream os;
    os << "P,Vm,FIC\n";
    for (std::size_t iV = 0; iV < g.Vm_axis.size(); ++iV)
        for (std::size_t iP = 0; iP < g.P_axis.size(); ++iP)
            os << fmt17(g.P_axis[iP]) << ',' << fmt17(g.Vm_axis[iV]) << ',' << fmt17(g.at(iV, iP))
               << '\n';
    write_text_file(path, os.str());
}

void write_epsilon_csv(const std::vector<EpsilonRow>& rows, const std::string& path) {
    std::ostringstream os;
    os << "eps,k,P,gap_u1_q1,gap_u2_q2,limit_distance_rel\n";
    for (const auto& r : rows)
        os << fmt17(r.eps) << ',' << fmt17(r.k) << ',' << fmt17(r.P) << ',' << fmt17(r.gap_u1_q1)
           << ',' << fmt17(r.gap_u2_q2) << ',' << fmt17(r.limit_distance_rel) << '\n';
    write_text_file(path, os.str());
}

namespace {

std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string axis_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

} // namespace

void write_profile_svg(const SteadyProfile& s, const std::string& path, const std::string& title) {
    const double W = 860, H = 540, ml = 80, mr = 170, mt = 40, mb = 60;
    const double pw = W - ml - mr, ph = H - mt - mb;

    double ymin = s.q2[0], ymax = s.q2[0];
    for (const auto* v : {&s.u, &s.q1, &s.q2, &s.u0}) {
        ymin = std::min(ymin, *std::min_element(v->begin(), v->end()));
        ymax = std::max(ymax, *std::max_element(v->begin(), v->end()));
    }
    const double pad = std::max(1e-12, 0.05 * (ymax - ymin));
    ymin -= pad;
    ymax += pad;

    auto sx = [&](double x) { return ml + pw * x / s.grid.length; };
    auto sy = [&](double y) { return mt + ph * (1.0 - (y - ymin) / (ymax - ymin)); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << W << ' ' << H
       << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << ml << "\" y=\"24\" font-size=\"16\">" << title << "</text>\n";

    // axes and ticks
    os << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
       << mt + ph << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
       << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double xv = s.grid.length * t / 5.0;
        const double yv = ymin + (ymax - ymin) * t / 5.0;
        os << "<line x1=\"" << svg_num(sx(xv)) << "\" y1=\"" << mt + ph << "\" x2=\""
           << svg_num(sx(xv)) << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << svg_num(sx(xv)) << "\" y=\"" << mt + ph + 20
           << "\" text-anchor=\"middle\">" << axis_label(xv) << "</text>\n";
        os << "<line x1=\"" << ml - 5 << "\" y1=\"" << svg_num(sy(yv)) << "\" x2=\"" << ml
           << "\" y2=\"" << svg_num(sy(yv)) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << ml - 8 << "\" y=\"" << svg_num(sy(yv) + 4)
           << "\" text-anchor=\"end\">" << axis_label(yv) << "</text>\n";
    }
    os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 18
       << "\" text-anchor=\"middle\">x [m]</text>\n";
    os << "<text x=\"20\" y=\"" << mt + ph / 2
       << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << mt + ph / 2
       << ")\">concentration [mol/m^3]</text>\n";

    const struct {
        const char* name;
        const char* color;
        const std::vector<double>* data;
    } curves[] = {{"u (lumen)", "#1f77b4", &s.u},
                  {"q1 (epithelium 1)", "#2ca02c", &s.q1},
                  {"q2 (epithelium 2)", "#d62728", &s.q2},
                  {"u0 (interstitium)", "#9467bd", &s.u0}};

    for (const auto& c : curves) {
        os << "<polyline fill=\"none\" stroke=\"" << c.color << "\" stroke-width=\"1.5\" points=\"";
        for (int i = 0; i < s.grid.n; ++i)
            os << svg_num(sx(s.grid.x(i))) << ',' << svg_num(sy((*c.data)[i])) << ' ';
        os << "\"/>\n";
    }
    double ly = mt + 10;
    for (const auto& c : curves) {
        os << "<line x1=\"" << ml + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw + 36
           << "\" y2=\"" << ly << "\" stroke=\"" << c.color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << ml + pw + 42 << "\" y=\"" << ly + 4 << "\">" << c.name
           << "</text>\n";
        ly += 20;
    }
    os << "</svg>\n";
    write_text_file(path, os.str());
}

} // namespace ccsim
