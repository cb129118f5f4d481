// Smallest end-to-end example: build the 7-qubit code from the n=1
// triangular lattice, encode a superposition, and apply the transversal
// level-2 rotation, which acts as a logical S gate.
#include <complex>
#include <iostream>

#include "colex/code.hpp"
#include "colex/lattice.hpp"
#include "colex/sim.hpp"
#include "colex/transversal.hpp"

int main() {
  using namespace colex;

  auto K = close_to_sphere(build_2d_triangle(1));
  auto code = build_code(K, 1, 1);
  std::cout << "qubits: " << code.n_qubits
            << ", stabilizer rank: " << code.rank_S()
            << ", gauge qubits: " << code.gauge_qubits() << "\n";

  // Solve for the qubit subset T and the per-qubit exponents of the gate.
  auto plan = gate_plan(code, 2);
  std::cout << "gate level " << plan.n << ": k = " << plan.k
            << ", |T| = " << plan.T.count() << "\n";

  // |+bar> = (|0bar> + |1bar>)/sqrt(2), then the transversal gate.
  auto psi0 = encode_logical(code, 0);
  auto psi1 = encode_logical(code, 1);
  StateVector plus(code.n_qubits);
  for (std::size_t i = 0; i < plus.amp.size(); ++i)
    plus.amp[i] = (psi0.amp[i] + psi1.amp[i]) / std::sqrt(2.0);

  auto rotated = apply_gate_plan(plus, plan);

  // Compare against the ideal logical S action.
  StateVector want(code.n_qubits);
  for (std::size_t i = 0; i < want.amp.size(); ++i)
    want.amp[i] =
        (psi0.amp[i] + cdouble(0.0, 1.0) * psi1.amp[i]) / std::sqrt(2.0);
  std::cout << "fidelity with (|0> + i|1>)/sqrt(2): " << fidelity(rotated, want)
            << "\n";
  return 0;
}
