// Copyright (C) 2026 The Sentinel Authors. All rights reserved.

// Licensed under the Apache License, Version 2.0 (the "License");
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

#include <json.hpp>

#include "sentinel/errors.hpp"

#include "sentinel/model.hpp"

// JSON document encoding shared by the HTTP API, the feed, the store log,
// config files and scenario files. Field names are the snake_case names of
// the model types. Decoding throws ValidationError with the field path.

namespace sentinel {

using Document = nlohmann::json;

void to_json(Document& doc, const UserKey& key);
void from_json(const Document& doc, UserKey& key);

void to_json(Document& doc, const ResponseKind& kind);
void from_json(const Document& doc, ResponseKind& kind);

void to_json(Document& doc, const DetectionPoint& point);
void from_json(const Document& doc, DetectionPoint& point);

void to_json(Document& doc, const SuspiciousEvent& event);
void from_json(const Document& doc, SuspiciousEvent& event);

void to_json(Document& doc, const ReputationLedger& ledger);
void from_json(const Document& doc, ReputationLedger& ledger);

void to_json(Document& doc, const AttackRecord& attack);
void from_json(const Document& doc, AttackRecord& attack);

void to_json(Document& doc, const ResponseDirective& directive);
void from_json(const Document& doc, ResponseDirective& directive);

// Decodes with field-path context; wraps nlohmann type errors in ValidationError.
template <typename T>
T decode(const Document& doc, std::string_view what) {
    try {
        return doc.get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string(what) + ": " + e.what());
    }
}

} // namespace sentinel
