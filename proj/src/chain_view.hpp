// Copyright 2026 The spinsync Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "spinsync/model.hpp"

namespace spinsync::detail {

// One chain's quantities as seen from its own equation of motion.
struct ChainView {
  cplx beta;
  double n;
  double A;
  double a;
  cplx R;
  double g;
};

inline ChainView chain_view(const ModelParams& p, const ScalarKit& k, int chain,
                            cplx beta) {
  if (chain == 1) return {beta, double(p.N1), k.A1, k.a1, k.R1, p.g1};
  return {beta, double(p.N2), k.A2, k.a2, k.R2, p.g2};
}

}  // namespace spinsync::detail
