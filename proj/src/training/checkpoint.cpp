#include "agepinn/training/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include "agepinn/error.hpp"
#include "agepinn/text.hpp"

namespace agepinn::train {
namespace {

using text::format_double;
using text::parse_double;
using text::split;

constexpr std::array<char, 4> kMagic{'P', 'F', 'C', 'K'};

template <class U>
void put_le(std::ostream& os, U v) {
  std::array<char, sizeof(U)> b;
  for (std::size_t i = 0; i < sizeof(U); ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  os.write(b.data(), b.size());
}

template <class U>
U get_le(std::istream& is) {
  std::array<unsigned char, sizeof(U)> b;
  if (!is.read(reinterpret_cast<char*>(b.data()), b.size())) throw IoError("checkpoint truncated");
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(b[i]) << (8 * i);
  return v;
}

std::string join_sizes(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

std::uint64_t parse_u64(const std::string& s) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw IoError("checkpoint: bad integer '" + s + "'");
  return v;
}

const std::string& need(const std::map<std::string, std::string>& m, const std::string& key) {
  auto it = m.find(key);
  if (it == m.end()) throw IoError("checkpoint: missing metadata key '" + key + "'");
  return it->second;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& cp) {
  std::ostringstream meta;
  meta << "kind=" << nn::model_kind_name(cp.model.kind()) << '\n';
  if (cp.model.kind() == nn::ModelKind::mlp) {
    meta << "widths=" << join_sizes(cp.model.mlp().widths()) << '\n';
  } else {
    meta << "layers=" << cp.model.lstm().layers() << '\n'
         << "hidden=" << cp.model.lstm().hidden() << '\n'
         << "dropout=" << format_double(cp.model.dropout_rate()) << '\n';
  }
  meta << "architecture=" << cp.model.architecture() << '\n'
       << "a0=" << format_double(cp.domain.a0) << '\n'
       << "t_min=" << format_double(cp.domain.t_min) << '\n'
       << "t_max=" << format_double(cp.domain.t_max) << '\n'
       << "c_age=" << format_double(cp.equation.age) << '\n'
       << "c_mortality=" << format_double(cp.equation.mortality) << '\n'
       << "scenario=" << cp.scenario << '\n'
       << "seed=" << cp.seed << '\n'
       << "epoch=" << cp.epoch << '\n'
       << "loss_history=" << cp.loss_history << '\n';
  const std::string text = meta.str();

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot write checkpoint " + path.string());
  os.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(os, kCheckpointVersion);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(text.size()));
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  const auto params = cp.model.parameters();
  put_le<std::uint64_t>(os, params.size());
  for (double p : params) put_le<std::uint64_t>(os, std::bit_cast<std::uint64_t>(p));
  if (!os) throw IoError("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path, std::optional<nn::ModelKind> expected) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint " + path.string());
  std::array<char, 4> magic{};
  if (!is.read(magic.data(), magic.size()) || magic != kMagic) {
    throw IoError("not a checkpoint (bad magic): " + path.string());
  }
  const auto version = get_le<std::uint32_t>(is);
  if (version != kCheckpointVersion) {
    throw IoError("unsupported checkpoint version " + std::to_string(version));
  }
  const auto meta_len = get_le<std::uint32_t>(is);
  std::string text(meta_len, '\0');
  if (!is.read(text.data(), meta_len)) throw IoError("checkpoint truncated");

  std::map<std::string, std::string> meta;
  for (auto line : split(text, '\n')) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw IoError("checkpoint: malformed metadata line");
    meta.emplace(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)));
  }

  Checkpoint cp;
  const nn::ModelKind kind = [&] {
    try {
      return nn::parse_model_kind(need(meta, "kind"));
    } catch (const UsageError& e) {
      throw IoError(std::string("checkpoint: ") + e.what());
    }
  }();
  if (expected && *expected != kind) {
    throw UsageError("checkpoint holds a " + std::string(nn::model_kind_name(kind)) +
                     " model, expected " + std::string(nn::model_kind_name(*expected)));
  }
  try {
    if (kind == nn::ModelKind::mlp) {
      std::vector<std::size_t> widths;
      for (auto w : split(need(meta, "widths"), ',')) widths.push_back(parse_u64(std::string(w)));
      cp.model = nn::Surrogate(nn::MlpParams(widths));
    } else {
      cp.model = nn::Surrogate(nn::LstmParams(parse_u64(need(meta, "layers")), parse_u64(need(meta, "hidden"))),
                               parse_double(need(meta, "dropout")));
    }
  } catch (const UsageError& e) {
    throw IoError(std::string("checkpoint: ") + e.what());
  }
  cp.domain.a0 = parse_double(need(meta, "a0"));
  cp.domain.t_min = parse_double(need(meta, "t_min"));
  cp.domain.t_max = parse_double(need(meta, "t_max"));
  cp.equation.age = parse_double(need(meta, "c_age"));
  cp.equation.mortality = parse_double(need(meta, "c_mortality"));
  cp.scenario = need(meta, "scenario");
  cp.seed = parse_u64(need(meta, "seed"));
  cp.epoch = parse_u64(need(meta, "epoch"));
  cp.loss_history = need(meta, "loss_history");

  const auto count = get_le<std::uint64_t>(is);
  auto params = cp.model.parameters();
  if (count != params.size()) {
    throw IoError("checkpoint: parameter count " + std::to_string(count) + " does not match architecture (" +
                  std::to_string(params.size()) + ")");
  }
  for (auto& p : params) p = std::bit_cast<double>(get_le<std::uint64_t>(is));
  if (is.peek() != std::char_traits<char>::eof()) throw IoError("checkpoint: trailing bytes");
  return cp;
}

}  // namespace agepinn::train
