// Copyright 2026 The mmqpt Authors
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

#ifndef MMQPT_TOOLS_CLI_H
#define MMQPT_TOOLS_CLI_H

#include <iosfwd>
#include <string>
#include <vector>

#include "mmqpt/fock.h"

namespace mmqpt::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kInputError = 2,
    kDataModelMismatch = 3,
    kIncompatibleArtifacts = 4,
    kPhysicalityFailure = 5,
};

/// Runs the tool; args excludes the program name.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

struct InputState {
    bool fock = true;
    std::vector<int> photons;
    std::vector<Complex> amplitudes;
};

/// "1,1" (Fock occupations) or "coherent:0.6,0.3-0.2i" (complex amplitudes, "a+bi" form).
InputState parse_state_spec(const std::string &spec);

}  // namespace mmqpt::cli

#endif  // MMQPT_TOOLS_CLI_H
