#include "gerbekit/forms.hpp"

namespace gerbekit {

Eigen::MatrixXd jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x,
                         double h) {
  const Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd j(f0.size(), x.size());
  for (int i = 0; i < x.size(); ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(x.size());
    e(i) = h;
    j.col(i) = (8.0 * (f(x + e) - f(x - e)) - (f(x + 2.0 * e) - f(x - 2.0 * e))) / (12.0 * h);
  }
  return j;
}

double derivative_at_zero(const std::function<double(double)>& f, double h) {
  return (8.0 * (f(h) - f(-h)) - (f(2.0 * h) - f(-2.0 * h))) / (12.0 * h);
}

int ChartedManifold::chart_index(const std::string& chart_name) const {
  for (std::size_t i = 0; i < charts.size(); ++i)
    if (charts[i].name == chart_name) return static_cast<int>(i);
  throw InvalidArgument("manifold '" + name + "' has no chart '" + chart_name + "'");
}

Eigen::VectorXd ChartedManifold::to_chart(int from, int to, const Eigen::VectorXd& x) const {
  if (from == to) return x;
  return transition(from, to, x);
}

Eigen::VectorXd ChartedManifold::push_tangent(int from, int to, const Eigen::VectorXd& x,
                                              const Eigen::VectorXd& u) const {
  if (from == to) return u;
  if (differential) return differential(from, to, x, u);
  const double h = 1e-3;
  const auto f = [&](double t) { return transition(from, to, Eigen::VectorXd(x + t * u)); };
  return (8.0 * (f(h) - f(-h)) - (f(2.0 * h) - f(-2.0 * h))) / (12.0 * h);
}

EuclideanSpace EuclideanSpace::chart_of(const ChartedManifold& m, int chart) {
  return EuclideanSpace(m.name + "/" + m.charts.at(chart).name, m.dimension, m.charts.at(chart).clearance);
}

void EuclideanSpace::require_clearance(const Point& p, const Tangent& v, double h) const {
  if (!clearance) return;
  const double need = std::abs(h) * v.norm();
  const double have = clearance(p);
  if (have < need) throw ChartClearanceError(name, have, need);
}

}  // namespace gerbekit
