#include "swcp/chain_io.hpp"

#include <json.hpp>

namespace swcp {

namespace {

using nlohmann::json;

[[noreturn]] void line_error(std::size_t line_no, const std::string& what) {
  throw DataError("line " + std::to_string(line_no) + ": " + what);
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                std::size_t line_no) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* key : allowed) ok = ok || item.key() == key;
    if (!ok) line_error(line_no, "unknown key '" + item.key() + "'");
  }
}

double number_field(const json& obj, const char* key, std::size_t line_no) {
  if (!obj.contains(key)) line_error(line_no, std::string("missing '") + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number()) line_error(line_no, std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::int64_t height_field(const json& obj, std::size_t line_no) {
  if (!obj.contains("height")) line_error(line_no, "missing 'height'");
  const json& v = obj.at("height");
  if (!v.is_number_integer()) line_error(line_no, "'height' must be an integer");
  return v.get<std::int64_t>();
}

ChainRecord parse_record(const json& obj, ChainFormat format, std::size_t line_no) {
  ChainRecord record;
  if (format == ChainFormat::tx_list) {
    check_keys(obj, {"height", "capacity", "txs"}, line_no);
    const double capacity = number_field(obj, "capacity", line_no);
    if (!obj.contains("txs") || !obj.at("txs").is_array())
      line_error(line_no, "missing 'txs' array");
    std::vector<Transaction> txs;
    for (const json& t : obj.at("txs")) {
      if (!t.is_object()) line_error(line_no, "transaction entries must be objects");
      check_keys(t, {"size", "fee_density"}, line_no);
      txs.push_back({number_field(t, "size", line_no), number_field(t, "fee_density", line_no),
                     false});
    }
    try {
      record.block = Block(capacity, std::move(txs));
    } catch (const ParamError& e) {
      line_error(line_no, e.what());
    }
  } else {
    check_keys(obj, {"height", "base_fee"}, line_no);
    const double fee = number_field(obj, "base_fee", line_no);
    if (!(fee >= 0.0)) line_error(line_no, "'base_fee' must be non-negative");
    record.base_fee = fee;
  }
  return record;
}

}  // namespace

ChainFormat chain_format_from_string(std::string_view name) {
  if (name == "tx-list") return ChainFormat::tx_list;
  if (name == "base-fee") return ChainFormat::base_fee;
  throw ParamError("unknown chain format '" + std::string(name) + "'");
}

ChainView ingest_chain(std::string_view data, ChainFormat format) {
  std::vector<ChainRecord> records;
  std::int64_t first_height = 0;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= data.size()) {
    const std::size_t eol = data.find('\n', pos);
    std::string_view line = data.substr(pos, eol == std::string_view::npos ? data.size() - pos
                                                                           : eol - pos);
    pos = eol == std::string_view::npos ? data.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      if (pos > data.size()) break;  // trailing newline
      line_error(line_no, "blank line");
    }

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      line_error(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) line_error(line_no, "record must be a JSON object");

    const std::int64_t height = height_field(obj, line_no);
    if (records.empty()) {
      first_height = height;
    } else {
      const std::int64_t expected = first_height + static_cast<std::int64_t>(records.size());
      if (height != expected)
        line_error(line_no, "height " + std::to_string(height) + " breaks the sequence; expected " +
                                std::to_string(expected));
    }
    records.push_back(parse_record(obj, format, line_no));
  }

  if (records.empty()) throw DataError("chain input contains no records");
  return ChainView(first_height, std::move(records));
}

std::string serialize_chain(const ChainView& chain, ChainFormat format) {
  std::string out;
  for (std::int64_t h = chain.first_height(); h <= chain.last_height(); ++h) {
    const ChainRecord& record = chain.at_height(h);
    json obj;
    obj["height"] = h;
    if (format == ChainFormat::tx_list) {
      if (!record.block)
        throw DataError("height " + std::to_string(h) + " has no transaction data");
      obj["capacity"] = record.block->capacity();
      json txs = json::array();
      for (const auto& tx : record.block->txs()) {
        if (tx.synthetic) continue;  // filler is a construction artifact
        txs.push_back({{"size", tx.size}, {"fee_density", tx.fee_density}});
      }
      obj["txs"] = std::move(txs);
    } else {
      if (!record.base_fee && !(record.block && record.block->base_fee()))
        throw DataError("height " + std::to_string(h) + " has no base fee");
      obj["base_fee"] = record.base_fee ? *record.base_fee : *record.block->base_fee();
    }
    out += obj.dump();
    out += '\n';
  }
  return out;
}

}  // namespace swcp
