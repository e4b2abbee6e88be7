#pragma once

namespace pcdiff::analysis {

// n, t: honest and adversarial queries per unit time; k: confirmation depth.
// 1 - (1 - 1/(nk))^(tk). Throws DomainError unless n, k > 0, t >= 0 and nk >= 1.
double simple_attack_prob(double n, double t, double k);
// 1 - e^(-t/n), the large-nk limit of simple_attack_prob.
double simple_attack_limit(double n, double t);

// 1 - (1 - 1/(nX))^(Xt - (n-t)phi); 0 when Xt <= (n-t)phi.
double raising_attack_prob(double n, double t, double phi, double x);

// Blocks a raised branch needs before dampening lets it catch up: (n-t)phi / (t(tau-1)).
double dampened_catchup_deficit(double n, double t, double tau, double phi);

}  // namespace pcdiff::analysis
