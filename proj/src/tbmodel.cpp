#include "magtb/tbmodel.hpp"

#include <cmath>
#include <sstream>

namespace magtb {

SparseC TBHamiltonian::full() const {
  const int N = size();
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(2 * static_cast<std::size_t>(lower.nonZeros()) + N);
  for (int k = 0; k < lower.outerSize(); ++k)
    for (SparseC::InnerIterator it(lower, k); it; ++it) {
      trip.emplace_back(it.row(), it.col(), it.value());
      trip.emplace_back(it.col(), it.row(), std::conj(it.value()));
    }
  for (int i = 0; i < N; ++i)
    if (diagonal(i) != 0.0) trip.emplace_back(i, i, diagonal(i));
  SparseC S(N, N);
  S.setFromTriplets(trip.begin(), trip.end());
  return S;
}

MatrixXc TBHamiltonian::dense() const { return MatrixXc(full()); }

cplx TBHamiltonian::entry(int row, int col) const {
  if (row == col) return diagonal(row);
  if (row > col) return lower.coeff(row, col);
  return std::conj(lower.coeff(col, row));
}

cplx magnetic_phase(const Vec2& n, const Vec2& m, double beta) {
  const double t = beta * wedge(n, m);
  return {std::cos(t), std::sin(t)};
}

TBHamiltonian tb_from_bonds(const PointSet& ps, const std::vector<Vec2>& phase_points,
                            const std::vector<std::pair<int, int>>& bonds, const std::vector<double>& weights,
                            double beta) {
  const int N = static_cast<int>(ps.size());
  if (bonds.empty()) throw DegenerateGraphError("tight-binding graph has no nearest-neighbour bonds");
  if (weights.size() != bonds.size()) throw ArgumentError("one hopping weight per bond required");
  TBHamiltonian H;
  H.beta = beta;
  H.a = ps.a;
  H.label = ps.label;
  H.diagonal = Eigen::VectorXd::Zero(N);
  std::vector<Eigen::Triplet<cplx>> trip;
  for (std::size_t b = 0; b < bonds.size(); ++b) {
    int n = bonds[b].first, m = bonds[b].second;
    if (n > m) std::swap(n, m);
    H.bonds.emplace_back(n, m);
    // stored entry is H[m][n], m > n
    trip.emplace_back(m, n, weights[b] * magnetic_phase(phase_points[n], phase_points[m], beta));
  }
  H.hopping_weights = weights;
  H.lower.resize(N, N);
  H.lower.setFromTriplets(trip.begin(), trip.end());
  return H;
}

TBHamiltonian build_tb(const PointSet& ps, double beta) {
  const NeighborGraph g = neighbor_graph(ps);
  return tb_from_bonds(ps, ps.points, g.pairs, std::vector<double>(g.pairs.size(), 1.0), beta);
}

TBHamiltonian build_honeycomb_tb(const PointSet& ps, double beta) {
  if (ps.sublattice.size() != ps.size()) throw StructureError("honeycomb build needs sublattice tags");
  const NeighborGraph g = neighbor_graph(ps);
  for (const auto& [n, m] : g.pairs)
    if (ps.sublattice[n] == ps.sublattice[m]) throw StructureError("nearest-neighbour bond inside one sublattice");
  return tb_from_bonds(ps, ps.points, g.pairs, std::vector<double>(g.pairs.size(), 1.0), beta);
}

TBHamiltonian build_random_hopping(const PointSet& ps, double beta, double c) {
  if (!ps.disorder) throw ArgumentError("random hopping needs a displaced point set with bond disorder");
  const Disorder& dis = *ps.disorder;
  if (dis.reference.size() != ps.size() || dis.bonds.empty())
    throw ArgumentError("bond disorder data missing or inconsistent");
  PointSet ref = ps;
  ref.a = dis.reference_a;
  std::vector<std::pair<int, int>> bonds;
  std::vector<double> weights;
  for (const BondDisorder& b : dis.bonds) {
    bonds.emplace_back(b.i, b.j);
    weights.push_back(std::exp(-c * b.eps * dis.reference_a * dis.reference_a));
  }
  TBHamiltonian H = tb_from_bonds(ref, dis.reference, bonds, weights, beta);
  H.seed = dis.seed;
  H.has_seed = true;
  return H;
}

double admissible_lambda(double beta, double a, int r) {
  if (r < 1) throw ArgumentError("admissible sequence index must be >= 1");
  if (!(a > 0.0)) throw ArgumentError("lattice constant must be positive");
  return 2.0 * beta + 4.0 * kPi * r / (a * a);
}

cplx loop_phase(const TBHamiltonian& H, const std::vector<int>& cycle) {
  cplx p{1.0, 0.0};
  for (std::size_t i = 0; i < cycle.size(); ++i) p *= H.entry(cycle[(i + 1) % cycle.size()], cycle[i]);
  return p;
}

MatrixXc gauge_transform(const MatrixXc& H, const Eigen::VectorXd& chi) {
  const VectorXc u = (kI * chi.cast<cplx>()).array().exp().matrix();
  return u.asDiagonal() * H * u.conjugate().asDiagonal();
}

std::string coo_csv(const TBHamiltonian& H) {
  std::ostringstream os;
  os.precision(17);
  os << "row,col,re,im\n";
  const SparseC S = H.full();
  for (int k = 0; k < S.outerSize(); ++k)
    for (SparseC::InnerIterator it(S, k); it; ++it)
      os << it.row() << ',' << it.col() << ',' << it.value().real() << ',' << it.value().imag() << '\n';
  return os.str();
}

nlohmann::json tb_metadata(const TBHamiltonian& H) {
  nlohmann::json j = {{"beta", H.beta}, {"a", H.a}, {"lattice", H.label}, {"sites", H.size()},
                      {"bonds", H.bonds.size()}};
  j["seed"] = H.has_seed ? nlohmann::json(H.seed) : nlohmann::json(nullptr);
  return j;
}

}  // namespace magtb
