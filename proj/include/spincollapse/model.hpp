#pragma once

// Couplings of the measurement model and matrix-free application of its
// Hamiltonian
//
//   H = H_A + H_E + H_AE + H_SA + H_SE + H_B
//   H_A  = - sum_{i<j in A} sum_a J_ij^a  S_i^a S_j^a
//   H_E  =   sum_{i<j in E} sum_a Om_ij^a I_i^a I_j^a
//   H_AE =   sum_{i in A, j in E} sum_a De_ij^a S_i^a I_j^a
//   H_SE =   sum_{i in E} sum_a Th_i^a S_sys^a I_i^a
//   H_SA =   sum_{i in A} Ga_i S_sys^z S_i^z
//   H_B  = - mu <Psi| sum_{i in A} S_i^z |Psi> sum_{j in A} S_j^z
//
// Every double sum runs over unordered pairs, each counted once.

#include <cstdint>
#include <vector>

#include "spincollapse/hilbert.hpp"
#include "spincollapse/pair_hamiltonian.hpp"

namespace spincollapse {

enum class GeometryKind { Rectangle4, Cube8 };

// Apparatus lattice. Site k sits at hypercube vertex k ^ (k >> 1) (Gray
// order), so the alternating state |up dn up dn ...> is the Neel state.
struct Geometry {
  GeometryKind kind = GeometryKind::Rectangle4;
  int n_apparatus = 4;
  std::vector<std::pair<int, int>> nn_pairs;
  std::vector<std::pair<int, int>> nnn_pairs;

  // Throws ConfigError unless n_apparatus is 4 or 8.
  static Geometry for_apparatus(int n_apparatus);
};

struct ModelConfig {
  int n_apparatus = 4;
  int n_environment = 15;
  double exchange = 1.0;  // J, the energy unit
  double gamma = 0.1;     // transverse anisotropy, J^x = J^y = gamma J^z
  double delta = 0.3;
  double omega = 0.8;
  double theta = 0.5;
  double mu = 12.0;
};

struct AxisTriple {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Bond between two sites given by subsystem-local indices.
struct Bond {
  int i = 0;
  int j = 0;
  AxisTriple coupling;
};

struct CouplingSet {
  ModelConfig config;
  Geometry geometry;
  std::uint64_t seed = 0;

  std::vector<Bond> apparatus;        // i < j in A; J_ij^a
  std::vector<Bond> environment;      // i < j in E; Om_ij^a
  std::vector<Bond> app_env;          // i in A, j in E; De_ij^a
  std::vector<AxisTriple> sys_env;    // per environment site; Th_i^a
  std::vector<double> sys_app;        // per apparatus site; Ga_i

  SiteLayout layout() const { return {config.n_apparatus, config.n_environment}; }
  double mu() const { return config.mu; }
};

// Coupling family labels used as RNG substreams below the coupling seed.
enum class CouplingFamily : std::uint64_t { AppEnv = 1, Environment = 2, SysEnv = 3 };

// Deterministic in (config, seed). Draw order inside each family: bonds in
// lexicographic (i, j) order, components x, y, z innermost.
CouplingSet build_couplings(const ModelConfig& config, std::uint64_t seed);

// Global-site bilinear terms for the linear part of H (everything but H_B).
std::vector<PairCoupling> linear_pairs(const CouplingSet& c);
// Only H_A, in global site indices.
std::vector<PairCoupling> apparatus_pairs(const CouplingSet& c);
// Only H_E, on environment-local sites 0..N_E-1.
std::vector<PairCoupling> environment_pairs(const CouplingSet& c);

struct FieldValue {
  double b_tilde = 0.0;
};

// Compiled form of a coupling set. Immutable once built.
class Hamiltonian {
 public:
  explicit Hamiltonian(const CouplingSet& c);

  const CouplingSet& couplings() const { return couplings_; }
  const SiteLayout& layout() const { return layout_; }
  const PairHamiltonian& linear() const { return linear_; }
  const PairHamiltonian& apparatus() const { return apparatus_; }
  Eigen::Index dimension() const { return layout_.dimension(); }

  // out = (H_linear + H_B(field)) psi with the field held fixed.
  void apply_frozen(FieldValue field, const StateVector& psi, StateVector& out) const;

 private:
  CouplingSet couplings_;
  SiteLayout layout_;
  PairHamiltonian linear_;
  PairHamiltonian apparatus_;
};

StateVector apply_linear_hamiltonian(const Hamiltonian& h, const StateVector& psi);
StateVector apply_linear_hamiltonian(const CouplingSet& c, const StateVector& psi);

// B = <psi| sum_{i in A} S_i^z |psi>, a plain inner product.
FieldValue magnetization_field(const StateVector& psi, const SiteLayout& layout);
FieldValue magnetization_field(const StateVector& psi, const CouplingSet& c);

// -mu * field * sum_{j in A} S_j^z psi
StateVector apply_nonlinear_term(const CouplingSet& c, FieldValue field, const StateVector& psi);

// Splitting between the two polarized apparatus states caused by H_B:
// mu * n_a^2 / 4.
double degeneracy_split(double mu, int n_a);

// Triangle-inequality bound on ||H_linear + H_B(field_cap)||.
double spectral_bound(const CouplingSet& c, double field_cap);
double spectral_bound(const Hamiltonian& h, double field_cap);

}  // namespace spincollapse
