#include "uqkd/arrivals_store.hpp"

#include <fmt/format.h>
#include <zlib.h>

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <span>

#include "uqkd/errors.hpp"

namespace uqkd {

namespace {

static_assert(std::endian::native == std::endian::little, "binary store assumes a little-endian host");

constexpr std::array<char, 4> kMagic = {'U', 'Q', 'K', 'D'};

std::uint32_t crc32_of(std::span<const unsigned char> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large buffers in pieces.
  constexpr std::size_t kPiece = 1u << 30;
  for (std::size_t offset = 0; offset < bytes.size(); offset += kPiece) {
    const std::size_t n = std::min(kPiece, bytes.size() - offset);
    crc = crc32(crc, bytes.data() + offset, static_cast<uInt>(n));
  }
  return static_cast<std::uint32_t>(crc);
}

class ByteWriter {
 public:
  template <class T>
  void put(const T& value) {
    const auto* p = reinterpret_cast<const unsigned char*>(&value);
    bytes_.insert(bytes_.end(), p, p + sizeof(T));
  }
  void put_string(const std::string& s) {
    put(static_cast<std::uint32_t>(s.size()));
    bytes_.insert(bytes_.end(), s.begin(), s.end());
  }
  std::vector<unsigned char>& bytes() { return bytes_; }

 private:
  std::vector<unsigned char> bytes_;
};

class ByteReader {
 public:
  ByteReader(std::span<const unsigned char> bytes, const std::filesystem::path& path)
      : bytes_(bytes), path_(path) {}

  template <class T>
  T get() {
    need(sizeof(T));
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::string get_string() {
    const auto n = get<std::uint32_t>();
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) {
      throw IntegrityError(fmt::format("{}: truncated arrival file", path_.string()));
    }
  }

  std::span<const unsigned char> bytes_;
  std::filesystem::path path_;
  std::size_t pos_ = 0;
};

std::vector<unsigned char> encode_header(const ArrivalSet& set) {
  ByteWriter w;
  for (char c : kMagic) w.put(c);
  w.put(kArrivalFormatVersion);
  w.put(set.header.n_photons);
  w.put(static_cast<std::uint64_t>(set.records.size()));
  w.put(set.header.seed);
  w.put(set.totals.absorbed);
  w.put_string(set.header.config_text);
  w.put_string(set.header.software_version);
  auto& bytes = w.bytes();
  const std::uint32_t crc = crc32_of(bytes);
  w.put(crc);
  return std::move(bytes);
}

}  // namespace

void ArrivalSet::check_consistency() const {
  if (totals.arrived != records.size()) {
    throw IntegrityError(fmt::format("arrival totals report {} records but {} are present",
                                     totals.arrived, records.size()));
  }
  if (totals.arrived + totals.absorbed + totals.escaped != header.n_photons) {
    throw IntegrityError(fmt::format("arrived + absorbed + escaped = {} but {} photons were launched",
                                     totals.arrived + totals.absorbed + totals.escaped,
                                     header.n_photons));
  }
}

ArrivalSet make_arrival_set(CampaignResult result, std::string config_text, std::uint64_t seed) {
  ArrivalSet set;
  set.header = {std::move(config_text), result.stats.launched, seed, kSoftwareVersion};
  set.records = std::move(result.records);
  set.totals = {result.stats.arrived, result.stats.absorbed, result.stats.escaped,
                result.stats.arrived_weight};
  set.check_consistency();
  return set;
}

std::size_t header_size(const ArrivalHeader& header) {
  return 4 + 4 + 8 * 4 + 4 + header.config_text.size() + 4 + header.software_version.size() + 4;
}

void persist(const ArrivalSet& set, const std::filesystem::path& path) {
  set.check_consistency();
  const std::vector<unsigned char> header = encode_header(set);

  ByteWriter body;
  for (const auto& r : set.records) {
    body.put(r.hit_x);
    body.put(r.hit_y);
    body.put(r.delay);
    body.put(r.aoa);
    body.put(r.weight);
  }
  const std::uint32_t body_crc = crc32_of(body.bytes());

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("{}: cannot open for writing", path.string()));
  out.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(body.bytes().data()),
            static_cast<std::streamsize>(body.bytes().size()));
  out.write(reinterpret_cast<const char*>(&body_crc), sizeof body_crc);
  out.close();
  if (!out) throw IoError(fmt::format("{}: write failed", path.string()));
}

ArrivalSet load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("{}: cannot open arrival file", path.string()));
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError(fmt::format("{}: read failed", path.string()));

  ByteReader r(bytes, path);
  std::array<char, 4> magic{};
  for (char& c : magic) c = r.get<char>();
  if (magic != kMagic) throw IntegrityError(fmt::format("{}: not an arrival file", path.string()));
  const auto version = r.get<std::uint32_t>();
  if (version != kArrivalFormatVersion) {
    throw IntegrityError(fmt::format("{}: unsupported format version {} (expected {})",
                                     path.string(), version, kArrivalFormatVersion));
  }
  ArrivalSet set;
  set.header.n_photons = r.get<std::uint64_t>();
  const auto n_records = r.get<std::uint64_t>();
  set.header.seed = r.get<std::uint64_t>();
  set.totals.absorbed = r.get<std::uint64_t>();
  set.header.config_text = r.get_string();
  set.header.software_version = r.get_string();
  const std::size_t header_end = r.position();
  const auto header_crc = r.get<std::uint32_t>();
  if (header_crc != crc32_of(std::span(bytes).first(header_end))) {
    throw IntegrityError(fmt::format("{}: header CRC mismatch", path.string()));
  }

  if (r.remaining() != n_records * kRecordBytes + 4) {
    throw IntegrityError(fmt::format("{}: record region size mismatch", path.string()));
  }
  const auto record_region = std::span(bytes).subspan(r.position(), n_records * kRecordBytes);
  set.records.reserve(n_records);
  for (std::uint64_t i = 0; i < n_records; ++i) {
    ArrivalRecord rec;
    rec.hit_x = r.get<double>();
    rec.hit_y = r.get<double>();
    rec.delay = r.get<double>();
    rec.aoa = r.get<double>();
    rec.weight = r.get<double>();
    set.records.push_back(rec);
  }
  const auto body_crc = r.get<std::uint32_t>();
  if (body_crc != crc32_of(record_region)) {
    throw IntegrityError(fmt::format("{}: record CRC mismatch", path.string()));
  }

  set.totals.arrived = n_records;
  if (set.totals.absorbed > set.header.n_photons - std::min(set.header.n_photons, n_records)) {
    throw IntegrityError(fmt::format("{}: inconsistent photon totals", path.string()));
  }
  set.totals.escaped = set.header.n_photons - n_records - set.totals.absorbed;
  for (const auto& rec : set.records) set.totals.arrived_weight += rec.weight;
  return set;
}

void export_csv(const ArrivalSet& set, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("{}: cannot open for writing", path.string()));
  out << "hit_x_m,hit_y_m,delay_s,aoa_rad,weight\n";
  for (const auto& r : set.records) {
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.hit_x, r.hit_y, r.delay, r.aoa,
                       r.weight);
  }
  out.close();
  if (!out) throw IoError(fmt::format("{}: write failed", path.string()));
}

}  // namespace uqkd
