// Copyright 2026 The ARL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "arl/power_flow.h"

#include <algorithm>
#include <cmath>
#include <queue>

#include "arl/error.h"

namespace arl {
namespace {

struct BranchAdmittance {
  Complex ff, ft, tf, tt;
};

BranchAdmittance LineAdmittance(const Line& l) {
  const Complex y = 1.0 / Complex(l.r, l.x);
  const Complex half_shunt(0.0, l.b / 2.0);
  return {y + half_shunt, -y, -y, y + half_shunt};
}

// Ideal transformer of ratio n on the HV side followed by the series
// impedance: I_hv = n^2 y V_hv - n y V_lv, I_lv = y V_lv - n y V_hv.
BranchAdmittance TransformerAdmittance(const Transformer& t) {
  const Complex y = 1.0 / Complex(t.r, t.x);
  const double n = t.Ratio();
  return {n * n * y, -n * y, -n * y, y};
}

bool LineActive(const GridModel& m, const Line& l) {
  return l.in_service && m.buses[l.from_bus].in_service && m.buses[l.to_bus].in_service;
}

bool TransformerActive(const GridModel& m, const Transformer& t) {
  return t.in_service && m.buses[t.hv_bus].in_service && m.buses[t.lv_bus].in_service;
}

double BranchLoading(const BranchAdmittance& y, Complex vf, Complex vt, double s_max) {
  const Complex i_f = y.ff * vf + y.ft * vt;
  const Complex i_t = y.tf * vf + y.tt * vt;
  const double s = std::max(std::abs(vf * std::conj(i_f)), std::abs(vt * std::conj(i_t)));
  return s / s_max;
}

}  // namespace

Eigen::MatrixXcd BuildAdmittance(const GridModel& model) {
  if (model.slack_bus >= model.buses.size() || !model.buses[model.slack_bus].in_service) {
    throw ModelError("admittance needs an in-service slack bus");
  }
  const auto n = static_cast<Eigen::Index>(model.buses.size());
  Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(n, n);
  auto stamp = [&y](std::size_t f, std::size_t t, const BranchAdmittance& b) {
    const auto fi = static_cast<Eigen::Index>(f);
    const auto ti = static_cast<Eigen::Index>(t);
    y(fi, fi) += b.ff;
    y(fi, ti) += b.ft;
    y(ti, fi) += b.tf;
    y(ti, ti) += b.tt;
  };
  for (const auto& l : model.lines) {
    if (LineActive(model, l)) stamp(l.from_bus, l.to_bus, LineAdmittance(l));
  }
  for (const auto& t : model.transformers) {
    if (TransformerActive(model, t)) stamp(t.hv_bus, t.lv_bus, TransformerAdmittance(t));
  }
  return y;
}

std::vector<bool> EnergizedBuses(const GridModel& model) {
  const std::size_t n = model.buses.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& l : model.lines) {
    if (!LineActive(model, l)) continue;
    adj[l.from_bus].push_back(l.to_bus);
    adj[l.to_bus].push_back(l.from_bus);
  }
  for (const auto& t : model.transformers) {
    if (!TransformerActive(model, t)) continue;
    adj[t.hv_bus].push_back(t.lv_bus);
    adj[t.lv_bus].push_back(t.hv_bus);
  }
  std::vector<bool> seen(n, false);
  if (model.slack_bus >= n || !model.buses[model.slack_bus].in_service) return seen;
  std::queue<std::size_t> frontier;
  frontier.push(model.slack_bus);
  seen[model.slack_bus] = true;
  while (!frontier.empty()) {
    const std::size_t b = frontier.front();
    frontier.pop();
    for (std::size_t nb : adj[b]) {
      if (!seen[nb]) {
        seen[nb] = true;
        frontier.push(nb);
      }
    }
  }
  return seen;
}

Eigen::VectorXcd BusInjections(const GridModel& model) {
  Eigen::VectorXcd s = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(model.buses.size()));
  const double kw_to_pu = 1.0 / (1000.0 * model.s_base_mva);
  for (const auto& inj : model.injections) {
    if (!inj.in_service) continue;
    const double p = inj.ActivePowerKw() * kw_to_pu;
    const Complex pq(p, p * inj.TanPhi());
    s(static_cast<Eigen::Index>(inj.bus)) += inj.kind == InjectionKind::kSgen ? pq : -pq;
  }
  return s;
}

PowerFlowSolution SolvePowerFlow(const GridModel& model, const PowerFlowOptions& options) {
  const std::size_t n = model.buses.size();
  PowerFlowSolution sol;
  sol.energized = EnergizedBuses(model);
  sol.vm.assign(n, 0.0);
  sol.va.assign(n, 0.0);
  sol.line_loading.assign(model.lines.size(), 0.0);
  sol.transformer_loading.assign(model.transformers.size(), 0.0);

  // Compact index space over the energized island; slack first.
  std::vector<std::size_t> island{model.slack_bus};
  for (std::size_t b = 0; b < n; ++b) {
    if (sol.energized[b] && b != model.slack_bus) island.push_back(b);
  }
  const auto m = static_cast<Eigen::Index>(island.size());
  const Eigen::MatrixXcd y_full = BuildAdmittance(model);
  const Eigen::VectorXcd s_full = BusInjections(model);
  Eigen::MatrixXcd y(m, m);
  Eigen::VectorXcd s_spec(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    s_spec(i) = s_full(static_cast<Eigen::Index>(island[i]));
    for (Eigen::Index k = 0; k < m; ++k) {
      y(i, k) = y_full(static_cast<Eigen::Index>(island[i]), static_cast<Eigen::Index>(island[k]));
    }
  }

  Eigen::VectorXd vm = Eigen::VectorXd::Ones(m);
  Eigen::VectorXd va = Eigen::VectorXd::Zero(m);
  const Eigen::Index npq = m - 1;
  auto voltages = [&]() {
    Eigen::VectorXcd v(m);
    for (Eigen::Index i = 0; i < m; ++i) v(i) = std::polar(vm(i), va(i));
    return v;
  };

  Eigen::VectorXcd v = voltages();
  for (int iter = 0;; ++iter) {
    const Eigen::VectorXcd ibus = y * v;
    const Eigen::VectorXcd s_calc = v.cwiseProduct(ibus.conjugate());
    Eigen::VectorXd f(2 * npq);
    for (Eigen::Index i = 0; i < npq; ++i) {
      const Complex mis = s_calc(i + 1) - s_spec(i + 1);
      f(i) = mis.real();
      f(npq + i) = mis.imag();
    }
    sol.max_mismatch = npq > 0 ? f.cwiseAbs().maxCoeff() : 0.0;
    sol.iterations = iter;
    if (!std::isfinite(sol.max_mismatch)) break;
    if (sol.max_mismatch < options.tol) {
      sol.converged = true;
      break;
    }
    if (iter >= options.max_iter) break;

    // dS/dVa = j diag(V) conj(diag(I) - Y diag(V))
    // dS/dVm = diag(V) conj(Y diag(V/|V|)) + conj(diag(I)) diag(V/|V|)
    Eigen::MatrixXd jac(2 * npq, 2 * npq);
    for (Eigen::Index r = 1; r < m; ++r) {
      for (Eigen::Index c = 1; c < m; ++c) {
        const Complex vnorm_c = v(c) / vm(c);
        Complex d_va = -v(r) * std::conj(y(r, c) * v(c));
        Complex d_vm = v(r) * std::conj(y(r, c) * vnorm_c);
        if (r == c) {
          d_va += v(r) * std::conj(ibus(r));
          d_vm += std::conj(ibus(r)) * vnorm_c;
        }
        d_va *= Complex(0.0, 1.0);
        jac(r - 1, c - 1) = d_va.real();
        jac(r - 1, npq + c - 1) = d_vm.real();
        jac(npq + r - 1, c - 1) = d_va.imag();
        jac(npq + r - 1, npq + c - 1) = d_vm.imag();
      }
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
    if (!(lu.rcond() > 1e-14)) break;
    const Eigen::VectorXd dx = lu.solve(-f);
    if (!dx.allFinite()) break;
    for (Eigen::Index i = 0; i < npq; ++i) {
      va(i + 1) += dx(i);
      vm(i + 1) += dx(npq + i);
    }
    v = voltages();
  }

  if (!sol.converged) return sol;

  Eigen::VectorXcd v_full = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < m; ++i) {
    sol.vm[island[i]] = vm(i);
    sol.va[island[i]] = va(i);
    v_full(static_cast<Eigen::Index>(island[i])) = v(i);
  }
  const Complex i_slack = (y.row(0) * v)(0);
  sol.slack_injection = v(0) * std::conj(i_slack);

  for (std::size_t k = 0; k < model.lines.size(); ++k) {
    const Line& l = model.lines[k];
    if (!LineActive(model, l) || !sol.energized[l.from_bus]) continue;
    sol.line_loading[k] = BranchLoading(LineAdmittance(l), v_full(static_cast<Eigen::Index>(l.from_bus)),
                                        v_full(static_cast<Eigen::Index>(l.to_bus)), l.s_max);
  }
  for (std::size_t k = 0; k < model.transformers.size(); ++k) {
    const Transformer& t = model.transformers[k];
    if (!TransformerActive(model, t) || !sol.energized[t.hv_bus]) continue;
    sol.transformer_loading[k] =
        BranchLoading(TransformerAdmittance(t), v_full(static_cast<Eigen::Index>(t.hv_bus)),
                      v_full(static_cast<Eigen::Index>(t.lv_bus)), t.s_max);
  }
  return sol;
}

}  // namespace arl
