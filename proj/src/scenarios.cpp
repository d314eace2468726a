#include "nhdyn/scenarios.hpp"

#include <cmath>

namespace nhdyn {

namespace {

using Params = std::map<std::string, double>;

Params withOverrides(Params defaults, const Params& overrides) {
  for (const auto& [name, value] : overrides) {
    auto it = defaults.find(name);
    if (it == defaults.end()) throw InvalidParam("unknown parameter '" + name + "'");
    if (!std::isfinite(value)) throw InvalidParam("parameter '" + name + "' is not finite");
    it->second = value;
  }
  return defaults;
}

std::vector<std::pair<std::string, double>> ordered(const Params& params,
                                                    const std::vector<std::string>& order) {
  std::vector<std::pair<std::string, double>> out;
  out.reserve(order.size());
  for (const auto& name : order) out.emplace_back(name, params.at(name));
  return out;
}

State makeState(std::initializer_list<double> q, std::initializer_list<double> v) {
  Eigen::VectorXd qq(static_cast<Eigen::Index>(q.size()));
  Eigen::VectorXd vv(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : q) qq[i++] = x;
  i = 0;
  for (double x : v) vv[i++] = x;
  return State(std::move(qq), std::move(vv));
}

ScenarioSpec freeParticle(const Params& overrides) {
  Params params = withOverrides({}, overrides);
  LagrangianModel model({"x", "y"}, {}, "0.5*(dx^2 + dy^2)");
  auto problem = NonholonomicProblem::build(std::move(model), {}, {}, true);
  return {"free_particle", params, std::move(problem), makeState({0, 0}, {1, 0.5}), true};
}

ScenarioSpec rollingDisk(const Params& overrides) {
  Params params = withOverrides({{"M", 1}, {"R", 1}, {"I1", 1}, {"I2", 1}}, overrides);
  // Momentum convention of the worked example: p_phi = I1 dphi, p_theta = I2 dtheta.
  LagrangianModel model({"x", "y", "theta", "phi"}, ordered(params, {"M", "R", "I1", "I2"}),
                        "0.5*M*(dx^2 + dy^2) + 0.5*I2*dtheta^2 + 0.5*I1*dphi^2");
  auto problem = NonholonomicProblem::build(
      std::move(model), {"dx - R*cos(theta)*dphi", "dy - R*sin(theta)*dphi"}, {}, true);
  // Rolling start: dx = R cos(theta) dphi, dy = R sin(theta) dphi.
  const double R = params.at("R");
  return {"rolling_disk", params, std::move(problem),
          makeState({0, 0, 0, 0}, {2 * R, 0, 1, 2}), true};
}

ScenarioSpec appellRho0(const Params& overrides) {
  Params params = withOverrides(
      {{"M", 1}, {"m", 1}, {"R", 1}, {"r", 0.5}, {"I1", 1}, {"I2", 1}, {"g", 9.8}}, overrides);
  LagrangianModel model(
      {"x", "y", "z", "theta", "phi"}, ordered(params, {"M", "m", "R", "r", "I1", "I2", "g"}),
      "0.5*M*(dx^2 + dy^2) + 0.5*m*(dx^2 + dy^2 + dz^2) + 0.5*I1*dphi^2 + 0.5*I2*dtheta^2 - "
      "m*g*z");
  auto problem = NonholonomicProblem::build(
      std::move(model),
      {"dx - R*cos(theta)*dphi", "dy - R*sin(theta)*dphi", "r*dphi - dz"}, {}, true);
  return {"appell_rho0", params, std::move(problem), makeState({0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}),
          true};
}

ScenarioSpec appellRho(const Params& overrides) {
  Params params = withOverrides({{"M", 1}, {"m", 1}, {"R", 1}, {"r", 0.5},
                                 {"I1", 1}, {"I2", 1}, {"g", 9.8}, {"rho", 0.3}},
                                overrides);
  // (x, y, z) locate the hanging mass; the disk contact point is
  // x_D = x - rho cos(theta), y_D = y - rho sin(theta).
  LagrangianModel model(
      {"x", "y", "z", "theta", "phi"},
      ordered(params, {"M", "m", "R", "r", "I1", "I2", "g", "rho"}),
      "0.5*M*((dx + rho*sin(theta)*dtheta)^2 + (dy - rho*cos(theta)*dtheta)^2) + "
      "0.5*m*(dx^2 + dy^2 + dz^2) + 0.5*I1*dphi^2 + 0.5*I2*dtheta^2 - m*g*z");
  auto problem = NonholonomicProblem::build(
      std::move(model),
      {"dx + rho*sin(theta)*dtheta - R*cos(theta)*dphi",
       "dy - rho*cos(theta)*dtheta - R*sin(theta)*dphi", "r*dphi - dz"},
      {}, true);
  // Rolling start at theta = 0 with dtheta = dphi = 1.
  const double R = params.at("R"), r = params.at("r"), rho = params.at("rho");
  return {"appell_rho", params, std::move(problem),
          makeState({0, 0, 0, 0, 0}, {R, rho, r, 1, 1}), false};
}

ScenarioSpec benentiPoints(const Params& overrides) {
  Params params = withOverrides({{"m1", 1}, {"m2", 1}}, overrides);
  LagrangianModel model({"x1", "y1", "x2", "y2"}, ordered(params, {"m1", "m2"}),
                        "0.5*m1*(dx1^2 + dy1^2) + 0.5*m2*(dx2^2 + dy2^2)");
  auto problem =
      NonholonomicProblem::build(std::move(model), {"dx1*dy2 - dx2*dy1"}, {}, true);
  return {"benenti_points", params, std::move(problem), makeState({0, 0, 1, 0}, {1, 1, 2, 2}),
          true};
}

ScenarioSpec benentiPointsNonChetaev(const Params& overrides) {
  Params params = withOverrides({{"m1", 1}, {"m2", 1}, {"f1", 1}, {"f2", 0}}, overrides);
  LagrangianModel model({"x1", "y1", "x2", "y2"}, ordered(params, {"m1", "m2", "f1", "f2"}),
                        "0.5*m1*(dx1^2 + dy1^2) + 0.5*m2*(dx2^2 + dy2^2)");
  auto problem = NonholonomicProblem::build(std::move(model), {"dx1*dy2 - dx2*dy1"}, {}, false,
                                            {{"m1*f1", "m1*f2", "m2*f1", "m2*f2"}});
  // Equal velocities: the force covector annihilates the relative velocity
  // and the multiplier equation degenerates.
  return {"benenti_points_nonchetaev", params, std::move(problem),
          makeState({0, 0, 1, 0}, {1, 1, 1, 1}), false};
}

ScenarioSpec benentiDisks(const Params& overrides) {
  Params params = withOverrides({{"M", 1}, {"R", 1}, {"I1", 1}, {"I2", 1}}, overrides);
  LagrangianModel model(
      {"x1", "y1", "theta1", "phi1", "x2", "y2", "theta2", "phi2"},
      ordered(params, {"M", "R", "I1", "I2"}),
      "0.5*M*(dx1^2 + dy1^2) + 0.5*I2*dtheta1^2 + 0.5*I1*dphi1^2 + "
      "0.5*M*(dx2^2 + dy2^2) + 0.5*I2*dtheta2^2 + 0.5*I1*dphi2^2");
  auto problem = NonholonomicProblem::build(
      std::move(model),
      {"dx1 - R*cos(theta1)*dphi1", "dy1 - R*sin(theta1)*dphi1",
       "dx2 - R*cos(theta2)*dphi2", "dy2 - R*sin(theta2)*dphi2", "dx1*dy2 - dx2*dy1"},
      {}, true);
  // Both disks rolling with theta1 = theta2 and a common dtheta, so the
  // parallelism constraint stays redundant along the flow.
  const double R = params.at("R");
  return {"benenti_disks", params, std::move(problem),
          makeState({0, 0, 0, 0, 3, 0, 0, 0}, {2 * R, 0, 1, 2, R, 0, 1, 1}), false};
}

ScenarioSpec misalignedForce(const Params& overrides) {
  Params params = withOverrides({{"g", 9.8}}, overrides);
  LagrangianModel model({"x", "y"}, ordered(params, {"g"}), "0.5*(dx^2 + dy^2) - g*y");
  auto problem = NonholonomicProblem::build(std::move(model), {"dy"}, {}, false, {{"1", "0"}});
  return {"misaligned_force", params, std::move(problem), makeState({0, 0}, {1, 0}), false};
}

}  // namespace

const std::vector<std::string>& scenarioNames() {
  static const std::vector<std::string> names = {
      "free_particle",  "rolling_disk",   "appell_rho0",
      "appell_rho",     "benenti_points", "benenti_points_nonchetaev",
      "benenti_disks",  "misaligned_force"};
  return names;
}

ScenarioSpec buildScenario(const std::string& name, const Params& overrides) {
  if (name == "free_particle") return freeParticle(overrides);
  if (name == "rolling_disk") return rollingDisk(overrides);
  if (name == "appell_rho0") return appellRho0(overrides);
  if (name == "appell_rho") return appellRho(overrides);
  if (name == "benenti_points") return benentiPoints(overrides);
  if (name == "benenti_points_nonchetaev") return benentiPointsNonChetaev(overrides);
  if (name == "benenti_disks") return benentiDisks(overrides);
  if (name == "misaligned_force") return misalignedForce(overrides);
  throw UnknownScenario(name);
}

namespace {

/// Rolling-disk kinematics with constant dtheta and a (possibly) uniformly
/// accelerated phi: theta = theta0 + w t, dphi(t) = dphi0 + phiDDot t,
/// x' = R cos(theta) dphi, y' = R sin(theta) dphi, integrated exactly.
void rollAnalytic(double R, double theta0, double w, double phi0, double dphi0, double phiDDot,
                  double t, double& theta, double& phi, double& x, double& y, double& dx,
                  double& dy) {
  theta = theta0 + w * t;
  phi = phi0 + dphi0 * t + 0.5 * phiDDot * t * t;
  const double dphi = dphi0 + phiDDot * t;
  dx = R * std::cos(theta) * dphi;
  dy = R * std::sin(theta) * dphi;
  if (w != 0.0) {
    x = R * ((dphi * std::sin(theta) - dphi0 * std::sin(theta0)) / w +
             (phiDDot / (w * w)) * (std::cos(theta) - std::cos(theta0)));
    y = R * ((-dphi * std::cos(theta) + dphi0 * std::cos(theta0)) / w +
             (phiDDot / (w * w)) * (std::sin(theta) - std::sin(theta0)));
  } else {
    x = R * std::cos(theta0) * (dphi0 * t + 0.5 * phiDDot * t * t);
    y = R * std::sin(theta0) * (dphi0 * t + 0.5 * phiDDot * t * t);
  }
}

}  // namespace

State oracleState(const ScenarioSpec& spec, const State& s0, double t) {
  if (spec.name == "free_particle" || spec.name == "benenti_points") {
    // Chetaev forces vanish: straight-line free flight.
    return State(s0.q + t * s0.v, s0.v);
  }
  if (spec.name == "rolling_disk") {
    const double R = spec.params.at("R");
    State out = s0;
    double theta, phi, x, y, dx, dy;
    rollAnalytic(R, s0.q[2], s0.v[2], s0.q[3], s0.v[3], 0.0, t, theta, phi, x, y, dx, dy);
    out.q[0] = s0.q[0] + x;
    out.q[1] = s0.q[1] + y;
    out.q[2] = theta;
    out.q[3] = phi;
    out.v[0] = dx;
    out.v[1] = dy;
    return out;
  }
  if (spec.name == "appell_rho0") {
    const double M = spec.params.at("M"), m = spec.params.at("m"), R = spec.params.at("R"),
                 r = spec.params.at("r"), I1 = spec.params.at("I1"), g = spec.params.at("g");
    const double phiDDot = -m * g * r / (I1 + (M + m) * R * R + m * r * r);
    State out = s0;
    double theta, phi, x, y, dx, dy;
    rollAnalytic(R, s0.q[3], s0.v[3], s0.q[4], s0.v[4], phiDDot, t, theta, phi, x, y, dx, dy);
    out.q[0] = s0.q[0] + x;
    out.q[1] = s0.q[1] + y;
    out.q[2] = s0.q[2] + r * (phi - s0.q[4]);  // dz = r dphi
    out.q[3] = theta;
    out.q[4] = phi;
    out.v[0] = dx;
    out.v[1] = dy;
    out.v[2] = r * (s0.v[4] + phiDDot * t);
    out.v[3] = s0.v[3];
    out.v[4] = s0.v[4] + phiDDot * t;
    return out;
  }
  throw NoClosedForm(spec.name);
}

}  // namespace nhdyn
