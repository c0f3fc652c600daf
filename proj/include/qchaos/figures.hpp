#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Desk-scale recipes that regenerate the data behind the reference figures:
//   fig2  TBRIM chaos border U_c/B vs direct-transition count K
//   fig3  IPR scaling xi vs U^2 rho_c rho_n
//   fig4  register-model eta(J) sweeps and J_c, J_cs vs n
//   fig5  band-projected variant at small detuning
//   fig6  melting map (J, E, S_q)
//   fig7  entropy growth S(t) for several n
//   fig8  classical reversal of the standard map
//   fig9  quantum rotator reversal
// Each recipe writes its CSVs plus a manifest with parameters and seeds.

namespace qchaos {

std::vector<std::string> figure_names();

void run_figure(const std::string& name, const std::string& out_dir,
                std::uint64_t master_seed = 1, int workers = 0);

}  // namespace qchaos
