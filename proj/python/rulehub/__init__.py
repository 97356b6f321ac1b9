# Copyright 2026 The RuleHub Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""IF..THEN rule store with dialog inference and ontology export."""

from ._rulehub import (
    DialogError,
    DialogSession,
    ParseError,
    PartExpr,
    RuleParseError,
    Store,
    StoreError,
    all_of,
    any_of,
    atom,
    flatten_statements,
    format_part,
    one_of,
    parse_part,
    start_dialog,
    tokenize,
)

__all__ = [
    "DialogError",
    "DialogSession",
    "ParseError",
    "PartExpr",
    "RuleParseError",
    "Store",
    "StoreError",
    "all_of",
    "any_of",
    "atom",
    "flatten_statements",
    "format_part",
    "one_of",
    "parse_part",
    "start_dialog",
    "tokenize",
]
