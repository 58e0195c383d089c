#pragma once

#include <string>
#include <vector>

#include "paralab/germ.hpp"

namespace paralab::fixtures {

Germ f0();        // z / (1 - z)
Germ log2exp();   // -log(2 - e^z)
Germ zexpz();     // z e^z
// Coefficients (a_1, a_2, ...) of a polynomial germ.
Germ polynomial(const std::vector<double>& a);

// Conjugating maps: "id", "expneg" (1 - e^{-z}), "mobius" (z / (1 + z)), "quad" (z + z^2).
Germ phi(const std::string& name);

// phi^{-1}(e^z phi(z)).
Germ exp_family(const Germ& phi);

// Resolves "f0", "log2exp", "zexpz", "exp-family:<phi>", "conj-f0:<phi>",
// "phi:<phi>", "poly:a1,a2,...".
Germ by_name(const std::string& name);

std::vector<std::string> names();

}  // namespace paralab::fixtures
