// Copyright 2026 The nlamp Authors
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

#ifndef NLAMP_ERRORS_H
#define NLAMP_ERRORS_H

#include <stdexcept>
#include <string>

namespace nlamp {

/// A value lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// A mode or photon-number index is out of range.
class RangeError : public std::out_of_range {
   public:
    using std::out_of_range::out_of_range;
};

/// Probability weight was lost to the finite photon-number cutoff.
class TruncationError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A composite Hilbert space would exceed the configured dimension cap.
class CapacityError : public std::length_error {
   public:
    using std::length_error::length_error;
};

class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace nlamp

#endif
