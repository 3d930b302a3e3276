#include "uqkd/arrivals_store.hpp"

#include <gtest/gtest.h>

#include <charconv>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "uqkd/errors.hpp"

using namespace uqkd;
using uqkd::testing::make_set;
using uqkd::testing::TempDir;

namespace {

std::vector<ArrivalRecord> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "hit_x_m,hit_y_m,delay_s,aoa_rad,weight");
  std::vector<ArrivalRecord> records;
  while (std::getline(in, line)) {
    std::array<double, 5> v{};
    std::istringstream row(line);
    std::string cell;
    for (double& x : v) {
      std::getline(row, cell, ',');
      std::from_chars(cell.data(), cell.data() + cell.size(), x);
    }
    records.push_back({v[0], v[1], v[2], v[3], v[4]});
  }
  return records;
}

void flip_byte(const std::filesystem::path& path, std::size_t offset) {
  std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
  f.seekg(static_cast<std::streamoff>(offset));
  char c = 0;
  f.read(&c, 1);
  c ^= 0x5a;
  f.seekp(static_cast<std::streamoff>(offset));
  f.write(&c, 1);
}

}  // namespace

TEST(ArrivalStore, EmptySetRoundTrips) {
  TempDir dir("store_empty");
  const auto set = make_set({}, 100);
  persist(set, dir / "empty.uqkd");
  EXPECT_EQ(std::filesystem::file_size(dir / "empty.uqkd"), header_size(set.header) + 4);
  EXPECT_EQ(load(dir / "empty.uqkd"), set);
}

TEST(ArrivalStore, RandomizedRoundTripAndSize) {
  TempDir dir("store_random");
  std::mt19937_64 gen(2024);
  for (std::size_t n : {1u, 17u, 5000u}) {
    const auto set = uqkd::testing::random_set(gen, n);
    const auto path = dir / "set.uqkd";
    persist(set, path);
    EXPECT_EQ(std::filesystem::file_size(path), header_size(set.header) + kRecordBytes * n + 4);
    EXPECT_EQ(load(path), set);
  }
}

TEST(ArrivalStore, MillionRecordsRoundTrip) {
  TempDir dir("store_large");
  std::mt19937_64 gen(1);
  const auto set = uqkd::testing::random_set(gen, 1'000'000);
  persist(set, dir / "big.uqkd");
  EXPECT_EQ(load(dir / "big.uqkd"), set);
}

TEST(ArrivalStore, DetectsCorruption) {
  TempDir dir("store_corrupt");
  std::mt19937_64 gen(3);
  const auto set = uqkd::testing::random_set(gen, 10);
  const auto path = dir / "c.uqkd";

  persist(set, path);
  flip_byte(path, 12);  // n_photons
  EXPECT_THROW(load(path), IntegrityError);

  persist(set, path);
  flip_byte(path, header_size(set.header) + 7);  // inside the first record
  EXPECT_THROW(load(path), IntegrityError);

  persist(set, path);
  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 9);
  EXPECT_THROW(load(path), IntegrityError);
}

TEST(ArrivalStore, RejectsWrongVersionAndMagic) {
  TempDir dir("store_version");
  const auto set = make_set({{0, 0, 0, 0, 1}}, 1);
  const auto path = dir / "v.uqkd";
  persist(set, path);
  flip_byte(path, 4);
  try {
    load(path);
    FAIL() << "expected version error";
  } catch (const IntegrityError& e) {
    EXPECT_NE(std::string(e.what()).find("version"), std::string::npos);
  }
  persist(set, path);
  flip_byte(path, 0);
  EXPECT_THROW(load(path), IntegrityError);
}

TEST(ArrivalStore, MissingFileIsIoError) {
  try {
    load("/nonexistent/dir/arrivals.uqkd");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/arrivals.uqkd"), std::string::npos);
  }
  EXPECT_THROW(persist(make_set({}, 0), "/nonexistent/dir/x.uqkd"), IoError);
}

TEST(ArrivalStore, InconsistentTotalsRejected) {
  auto set = make_set({{0, 0, 0, 0, 1}}, 5);
  set.totals.escaped += 1;
  EXPECT_THROW(set.check_consistency(), IntegrityError);
}

TEST(CsvExport, OneRecordTwoLines) {
  TempDir dir("csv_one");
  const auto set = make_set({{0.01, -0.02, 2.5e-10, 0.1, 0.245}}, 3);
  export_csv(set, dir / "one.csv");
  std::ifstream in(dir / "one.csv");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  EXPECT_EQ(text.find('\r'), std::string::npos);
  // Delay is written in seconds.
  EXPECT_EQ(read_csv(dir / "one.csv").at(0).delay, 2.5e-10);
}

TEST(CsvExport, ReimportIsExact) {
  TempDir dir("csv_roundtrip");
  std::mt19937_64 gen(8);
  const auto set = uqkd::testing::random_set(gen, 2000);
  export_csv(set, dir / "r.csv");
  EXPECT_EQ(read_csv(dir / "r.csv"), set.records);
}
