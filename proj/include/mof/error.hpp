// Copyright 2026 The MOF Toolkit Authors
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

#ifndef MOF__ERROR_HPP_
#define MOF__ERROR_HPP_

#include <stdexcept>
#include <string>

namespace mof
{

/// Malformed or inconsistent input data (files, windows, configs).
class DataError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values produced during training or gradient computation.
class NumericalError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace mof

#endif  // MOF__ERROR_HPP_
