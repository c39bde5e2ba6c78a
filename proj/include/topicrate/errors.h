// Copyright 2026 The topicrate Authors
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

#ifndef TOPICRATE_ERRORS_H_
#define TOPICRATE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace topicrate {

// Base of every error raised by the library. The subclasses name the failure
// conditions callers are expected to distinguish.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define TOPICRATE_DEFINE_ERROR(Name)         \
  class Name : public Error {                \
   public:                                   \
    using Error::Error;                      \
  }

TOPICRATE_DEFINE_ERROR(InvalidArgument);
TOPICRATE_DEFINE_ERROR(EmptyCorpus);
TOPICRATE_DEFINE_ERROR(EmptySlice);
TOPICRATE_DEFINE_ERROR(DuplicateLabel);
TOPICRATE_DEFINE_ERROR(UnknownLabel);
TOPICRATE_DEFINE_ERROR(DimensionMismatch);
TOPICRATE_DEFINE_ERROR(DegenerateAgreement);
TOPICRATE_DEFINE_ERROR(ZeroVariance);
TOPICRATE_DEFINE_ERROR(MalformedAnnotation);
TOPICRATE_DEFINE_ERROR(DocumentSetMismatch);
TOPICRATE_DEFINE_ERROR(EmptyInput);
TOPICRATE_DEFINE_ERROR(FormatError);

#undef TOPICRATE_DEFINE_ERROR

}  // namespace topicrate

#endif  // TOPICRATE_ERRORS_H_
