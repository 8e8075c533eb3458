#pragma once

// Block and chain data model plus synthetic generation of congestion and
// adversary-control vectors.

#include <cstdint>
#include <optional>
#include <vector>

#include "swcp/errors.hpp"

namespace swcp {

struct Transaction {
  double size{0.0};         // weight units, > 0
  double fee_density{0.0};  // fee per weight unit, >= 0
  bool synthetic{false};    // zero-fee filler appended to reach full capacity
};

// A block is kept full by convention: if the supplied transactions do not
// reach capacity, a synthetic zero-fee transaction covers the remainder.
class Block {
 public:
  Block(double capacity, std::vector<Transaction> txs,
        std::optional<double> base_fee = std::nullopt);

  double capacity() const { return capacity_; }
  const std::vector<Transaction>& txs() const { return txs_; }
  const std::optional<double>& base_fee() const { return base_fee_; }

  // Total fee revenue: sum of size * fee_density over all transactions.
  double total_fee() const;

 private:
  double capacity_{0.0};
  std::vector<Transaction> txs_;
  std::optional<double> base_fee_;
};

// Per-height binary signals; 1 = congested, 0 = uncongested. Indexing is
// 0-based in memory, 1-based wherever an index crosses the public API
// (witnesses, period positions).
using CongestionVector = std::vector<std::uint8_t>;
using ControlVector = std::vector<std::uint8_t>;

// Each bit independently 1 with probability p. Deterministic per seed;
// drawn from the "congestion" stream.
CongestionVector generate_congestion_vector(std::int64_t n, double p, std::uint64_t seed);

// Each bit independently 1 with probability alpha. Uses the "control"
// stream, so it is independent of generate_congestion_vector even when both
// get the same seed.
ControlVector sample_control_vector(std::int64_t n, double alpha, std::uint64_t seed);

// One chain height: transaction data (tx-list format), a base fee
// (base-fee format), or both.
struct ChainRecord {
  std::optional<Block> block;
  std::optional<double> base_fee;
};

// Consecutive heights starting at first_height; never empty.
class ChainView {
 public:
  ChainView(std::int64_t first_height, std::vector<ChainRecord> records);

  std::int64_t first_height() const { return first_height_; }
  std::int64_t last_height() const {
    return first_height_ + static_cast<std::int64_t>(records_.size()) - 1;
  }
  std::size_t size() const { return records_.size(); }
  bool covers(std::int64_t height) const {
    return height >= first_height_ && height <= last_height();
  }

  const ChainRecord& at_height(std::int64_t height) const;
  double base_fee(std::int64_t height) const;  // DataError if absent

 private:
  std::int64_t first_height_{0};
  std::vector<ChainRecord> records_;
};

}  // namespace swcp
