#pragma once

// File formats: sequences, alphabets, context trees, partitions and models.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "mmm/alphabet.hpp"
#include "mmm/context_tree.hpp"
#include "mmm/model.hpp"
#include "mmm/partition.hpp"

namespace mmm {

/// chars: every non-whitespace character is a symbol.
/// tokens: whitespace-separated tokens are symbols.
enum class TokenMode { kChars, kTokens };

TokenMode parse_token_mode(std::string_view name);

std::string read_file(const std::filesystem::path& path);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// One symbol per line; blank lines are ignored.
Alphabet parse_alphabet(std::string_view text);

/// Splits text into symbols. Without a declared alphabet, the alphabet is
/// inferred in order of first appearance.
Sequence parse_sequence(std::string_view text, TokenMode mode,
                        const std::optional<Alphabet>& alphabet = std::nullopt);

/// chars mode needs a single-character alphabet. Ends with a newline.
std::string format_sequence(const Sequence& seq, TokenMode mode);

/// One context per line, "EMPTY" for the empty context. Blank lines are
/// errors; a final newline is not.
ContextTree parse_tree(std::string_view text, const Alphabet& alphabet, TokenMode mode);

/// One line per cell, member state strings separated by spaces.
std::string format_partition(const Partition& p, const Alphabet& alphabet);

/// Inverse of format_partition; throws std::invalid_argument for unknown,
/// repeated or missing states.
Partition parse_partition(std::string_view text, const Alphabet& alphabet, int order);

/// {"alphabet": [...], "order": M, "cells": [[state, ...], ...],
///  "probs": [[p_0, ..., p_{|A|-1}], ...]}
nlohmann::json model_to_json(const PartitionModel& model);

/// Probabilities must sum to 1 within 1e-9 per cell.
PartitionModel model_from_json(const nlohmann::json& j);

/// FNV-1a 64 of the compact model JSON, as 16 hex digits.
std::string model_hash(const PartitionModel& model);

}  // namespace mmm
