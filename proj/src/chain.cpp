#include "swcp/chain.hpp"

#include <cmath>
#include <string>

#include "swcp/rng.hpp"

namespace swcp {

namespace {

void check_probability(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0))
    throw ParamError(std::string(name) + " must lie in [0, 1]");
}

CongestionVector draw_bits(std::int64_t n, double prob, std::uint64_t seed,
                           std::string_view purpose) {
  if (n < 1) throw ParamError("vector length must be at least 1");
  StreamRng rng(seed, purpose);
  CongestionVector bits(static_cast<std::size_t>(n));
  for (auto& b : bits) b = rng.bernoulli(prob) ? 1 : 0;
  return bits;
}

}  // namespace

Block::Block(double capacity, std::vector<Transaction> txs, std::optional<double> base_fee)
    : capacity_(capacity), txs_(std::move(txs)), base_fee_(base_fee) {
  if (!(capacity_ > 0.0) || !std::isfinite(capacity_))
    throw ParamError("block capacity must be positive and finite");
  double used = 0.0;
  for (const auto& tx : txs_) {
    if (!(tx.size > 0.0) || !std::isfinite(tx.size))
      throw ParamError("transaction size must be positive and finite");
    if (!(tx.fee_density >= 0.0) || !std::isfinite(tx.fee_density))
      throw ParamError("transaction fee density must be non-negative and finite");
    used += tx.size;
  }
  if (used > capacity_) throw ParamError("transactions exceed block capacity");
  if (used < capacity_) txs_.push_back(Transaction{capacity_ - used, 0.0, true});
}

double Block::total_fee() const {
  double fee = 0.0;
  for (const auto& tx : txs_) fee += tx.size * tx.fee_density;
  return fee;
}

CongestionVector generate_congestion_vector(std::int64_t n, double p, std::uint64_t seed) {
  check_probability(p, "p");
  return draw_bits(n, p, seed, "congestion");
}

ControlVector sample_control_vector(std::int64_t n, double alpha, std::uint64_t seed) {
  check_probability(alpha, "alpha");
  return draw_bits(n, alpha, seed, "control");
}

ChainView::ChainView(std::int64_t first_height, std::vector<ChainRecord> records)
    : first_height_(first_height), records_(std::move(records)) {
  if (records_.empty()) throw ParamError("chain must contain at least one block");
}

const ChainRecord& ChainView::at_height(std::int64_t height) const {
  if (!covers(height))
    throw DataError("height " + std::to_string(height) + " outside chain range [" +
                    std::to_string(first_height_) + ", " + std::to_string(last_height()) + "]");
  return records_[static_cast<std::size_t>(height - first_height_)];
}

double ChainView::base_fee(std::int64_t height) const {
  const ChainRecord& rec = at_height(height);
  if (rec.base_fee) return *rec.base_fee;
  if (rec.block && rec.block->base_fee()) return *rec.block->base_fee();
  throw DataError("no base fee recorded at height " + std::to_string(height));
}

}  // namespace swcp
