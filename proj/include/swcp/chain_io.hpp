#pragma once

// JSON-Lines chain ingestion and canonical serialization.
//
// tx-list:  {"height": 100, "capacity": 100.0, "txs": [{"size": 60.0, "fee_density": 8.0}, ...]}
// base-fee: {"height": 100, "base_fee": 25.0}
//
// One object per line, UTF-8, heights strictly ascending by 1. Gaps,
// duplicates, unknown keys, or malformed records are rejected with the
// offending line number.

#include <string>
#include <string_view>

#include "swcp/chain.hpp"

namespace swcp {

enum class ChainFormat { tx_list, base_fee };

ChainFormat chain_format_from_string(std::string_view name);  // "tx-list" | "base-fee"

ChainView ingest_chain(std::string_view data, ChainFormat format);

// Canonical form: one compact JSON object per line, keys sorted, synthetic
// filler transactions omitted. serialize(ingest(x)) is a fixed point.
std::string serialize_chain(const ChainView& chain, ChainFormat format);

}  // namespace swcp
