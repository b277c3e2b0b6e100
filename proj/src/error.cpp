// Copyright 2026 The seedcls Authors.
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

#include "seedcls/error.hpp"

namespace seedcls {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kAllDocumentsEmpty: return "AllDocumentsEmpty";
    case ErrorCode::kEmptySubset: return "EmptySubset";
    case ErrorCode::kVocabularyTooSmall: return "VocabularyTooSmall";
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNameOutOfVocabulary: return "NameOutOfVocabulary";
    case ErrorCode::kNoDisjointExpansion: return "NoDisjointExpansion";
    case ErrorCode::kAllSeedsOutOfVocabulary: return "AllSeedsOutOfVocabulary";
    case ErrorCode::kZeroResultant: return "ZeroResultant";
    case ErrorCode::kEmptyDocument: return "EmptyDocument";
    case ErrorCode::kDegenerateFrequency: return "DegenerateFrequency";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kLabelOutOfRange: return "LabelOutOfRange";
    case ErrorCode::kEmptyMatrix: return "EmptyMatrix";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kValidation: return "Validation";
    case ErrorCode::kMissingArtifact: return "MissingArtifact";
    case ErrorCode::kVocabularyMismatch: return "VocabularyMismatch";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace seedcls
