// SPDX-License-Identifier: Apache-2.0
//
// hypersim: simulator and control stack for programmable wireless environments
// Copyright (C) 2026 the hypersim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef HYPERSIM_ERRORS_HPP
#define HYPERSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hypersim {

// Malformed input that never made it to the object model (bad JSON, bad CLI value).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structurally valid input that violates a model invariant. The message carries
// the path to the offending field, e.g. "walls[2].id: duplicate id 7".
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A wave interaction was requested on the uncontrolled back face of a tile.
// This signals a bug in the caller (ray bookkeeping or routing), not bad input.
struct BackFaceHit : std::logic_error {
    using std::logic_error::logic_error;
};

// Compile search budget below the minimum the optimizer can run with.
struct BudgetTooSmall : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No admissible air path between the requested endpoints.
struct NoPathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A tile object with no tiles cannot elect a representative.
struct EmptyObject : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An addressed tile is unreachable in the intra-object wired topology.
struct PartitionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A report was rendered against a scenario file it was not produced from.
struct HashMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace hypersim

#endif // HYPERSIM_ERRORS_HPP
