// Copyright 2026 The s2tcurate Authors. All Rights Reserved.
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

// Regenerates the bundled toy corpus under data/toy.

#include <cstdlib>
#include <iostream>
#include <string>

#include "s2tcurate/toy_corpus.hpp"

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "data/toy";
  const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 7;
  const auto corpus = s2tcurate::make_toy_corpus(seed);
  s2tcurate::write_toy_corpus(corpus, dir);
  std::cout << "wrote " << corpus.examples.size() << " examples (" << corpus.noisy_ids.size()
            << " noisy) to " << dir << '\n';
  return 0;
}
