#pragma once

#include <string>
#include <vector>

#include "ccsim/eigenproblem.hpp"
#include "ccsim/steady.hpp"
#include "ccsim/transient.hpp"

namespace ccsim {

struct FicPoint;
struct FicGrid;

/// Shortest round-trippable decimal form ("%.17g").
std::string fmt17(double v);

void write_text_file(const std::string& path, const std::string& content);

/// Header x,u,q1,q2,u0; one row per node, 17 significant digits.
void write_steady_csv(const SteadyProfile& s, const std::string& path);

/// Header x,U1,U2,Q1,Q2,U0,ph1,ph2,phi1,phi2,ph0.
void write_eigen_csv(const EigenPair& pair, const std::string& path);

/// One-line summary {lambda, lambda_minus, F_residual, min_ph0_minus_phi2}.
std::string eigen_summary_json(const EigenPair& pair, const EigenCertificates& cert);

/// Header t,M,mass_total,ub; one row per observer sample.
void write_trajectory_csv(const DecayReport& r, const std::string& path);

/// Header x,u1,u2,q1,q2,u0.
void write_snapshot_csv(const TransientState& s, const std::string& path);

void write_fic_curve_csv(const std::vector<FicPoint>& pts, const std::string& path);

/// Long form P,Vm,FIC.
void write_fic_grid_csv(const FicGrid& grid, const std::string& path);

/// Header eps,k,P,gap_u1_q1,gap_u2_q2,limit_distance_rel.
void write_epsilon_csv(const std::vector<EpsilonRow>& rows, const std::string& path);

/// Line plot of u, q1, q2, u0 against x, emitted as plain SVG text.
void write_profile_svg(const SteadyProfile& s, const std::string& path, const std::string& title);

} // namespace ccsim
