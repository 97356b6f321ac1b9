// Copyright 2026 The RuleHub Authors
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

#include <string>

namespace oracle {

inline const std::string kPrefixBlock =
    "@prefix : <http://example.org/ck#> .\n"
    "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n"
    "@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n"
    "@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n"
    "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n";

/// Ontology of the fly -> {bird, plane, rocket} rule set.
inline const std::string kFlyOntology = kPrefixBlock +
                                        "\n"
                                        ":Bird a owl:Class .\n"
                                        ":Fly a owl:Class .\n"
                                        ":Plane a owl:Class .\n"
                                        ":Rocket a owl:Class .\n";

}  // namespace oracle
