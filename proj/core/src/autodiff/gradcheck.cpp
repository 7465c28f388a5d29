// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "hwk/autodiff.hpp"

namespace hwk::ad {

GradcheckResult gradcheck(const std::function<Tensor(Tape&)>& f, const std::vector<Tensor>& params, double h) {
  std::vector<Tensor> ps = params;
  for (auto& p : ps) p.zero_grad();
  {
    Tape tape;
    const Tensor loss = f(tape);
    tape.backward(loss);
  }
  auto evaluate = [&] {
    Tape tape;
    tape.set_recording(false);
    return f(tape).item();
  };

  GradcheckResult r;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    auto& p = ps[k];
    const std::vector<double> analytic = p.has_grad() ? std::vector<double>(p.grad().begin(), p.grad().end())
                                                      : std::vector<double>(p.size(), 0.0);
    auto data = p.data();
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double orig = data[i];
      data[i] = orig + h;
      const double up = evaluate();
      data[i] = orig - h;
      const double down = evaluate();
      data[i] = orig;
      const double numeric = (up - down) / (2.0 * h);
      const double err =
          std::abs(analytic[i] - numeric) / std::max({std::abs(analytic[i]), std::abs(numeric), 1e-6});
      ++r.checked;
      if (err > r.max_rel_error) {
        r.max_rel_error = err;
        r.worst_param = k;
        r.worst_index = i;
      }
    }
  }
  return r;
}

}  // namespace hwk::ad
