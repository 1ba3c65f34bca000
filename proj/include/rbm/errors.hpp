// Copyright 2026 The Authors.
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

#ifndef RBM_ERRORS_HPP_
#define RBM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace rbm {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define RBM_DEFINE_ERROR(Name)         \
  class Name : public Error {          \
   public:                             \
    using Error::Error;                \
  }

RBM_DEFINE_ERROR(InvalidArgument);
RBM_DEFINE_ERROR(DimensionMismatch);
RBM_DEFINE_ERROR(SingularMatrix);
RBM_DEFINE_ERROR(ParseError);
RBM_DEFINE_ERROR(IOFailure);
RBM_DEFINE_ERROR(NonUniformColumn);
RBM_DEFINE_ERROR(NoSolution);
RBM_DEFINE_ERROR(Timeout);
RBM_DEFINE_ERROR(UnknownLabel);
RBM_DEFINE_ERROR(DependentContractionSet);
RBM_DEFINE_ERROR(TooLarge);

#undef RBM_DEFINE_ERROR

}  // namespace rbm

#endif  // RBM_ERRORS_HPP_
