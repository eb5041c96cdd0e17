#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "habit/model.hpp"

namespace habit {

/// Structural problem in a snapshot document (bad JSON, missing or ill-typed
/// field, unsupported version, inconsistent indices).
class SnapshotError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Serializes the full model state as a JSON document (format_version 1).
///
/// The emitter is canonical — contexts sorted lexicographically by token id,
/// counts sorted by token id, weights printed with 17 significant digits — so
/// equal model states produce byte-identical documents and a restore followed
/// by a re-snapshot reproduces the original bytes.
std::string to_snapshot_text(const Model& model);

/// Rebuilds a model from a snapshot document. The restored model answers
/// every query bit-for-bit like the one that was saved. Throws SnapshotError
/// naming the offending field otherwise.
Model from_snapshot_text(std::string_view text);

}  // namespace habit
