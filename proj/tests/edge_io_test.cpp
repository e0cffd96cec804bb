#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "dbfs/edge_io.hpp"
#include "dbfs/errors.hpp"
#include "dbfs/oracle.hpp"
#include "test_graphs.hpp"

namespace dbfs {
namespace {

namespace fs = std::filesystem;

class EdgeIo : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dbfs_edge_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_text(const std::string& name, const std::string& body) {
    const fs::path path = dir_ / name;
    std::ofstream(path, std::ios::binary) << body;
    return path;
  }

  fs::path dir_;
};

TEST_F(EdgeIo, TwoEdgeText) {
  const EdgeList g = load_edge_list(write_text("g.txt", "0 1\n1 0\n"), EdgeFormat::text);
  EXPECT_EQ(g.m(), 2u);
  EXPECT_EQ(g.n, 2u);
  EXPECT_EQ(g.edges, (std::vector<Edge>{{0, 1}, {1, 0}}));
}

TEST_F(EdgeIo, EmptyFile) {
  const EdgeList text = load_edge_list(write_text("e.txt", ""), EdgeFormat::text);
  EXPECT_EQ(text.m(), 0u);
  EXPECT_EQ(text.n, 0u);
  const EdgeList bin = load_edge_list(write_text("e.bin", ""), EdgeFormat::binary);
  EXPECT_EQ(bin.m(), 0u);
  EXPECT_EQ(bin.n, 0u);
}

TEST_F(EdgeIo, CommentsAndHeader) {
  const EdgeList g = load_edge_list(write_text("h.txt", "# n 10\n# a comment\n\n2 3 # trailing\n"), EdgeFormat::text);
  EXPECT_EQ(g.n, 10u);
  EXPECT_EQ(g.edges, (std::vector<Edge>{{2, 3}}));
}

TEST_F(EdgeIo, MalformedLineReportsLineNumber) {
  const fs::path path = write_text("bad.txt", "0 1\n1 x\n");
  try {
    load_edge_list(path, EdgeFormat::text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(load_edge_list(write_text("one.txt", "5\n"), EdgeFormat::text), ParseError);
  EXPECT_THROW(load_edge_list(write_text("tail.txt", "1 2 3\n"), EdgeFormat::text), ParseError);
}

TEST_F(EdgeIo, IdOverflowIsFormatError) {
  EXPECT_THROW(load_edge_list(write_text("big.txt", "0 99999999999999999999999\n"), EdgeFormat::text),
               FormatError);
  EXPECT_THROW(load_edge_list(write_text("max.txt", "0 18446744073709551615\n"), EdgeFormat::text), FormatError);
  EXPECT_THROW(load_edge_list(write_text("hdr.txt", "# n 4\n0 4\n"), EdgeFormat::text), FormatError);
}

TEST_F(EdgeIo, TruncatedBinaryIsFormatError) {
  EXPECT_THROW(load_edge_list(write_text("t.bin", std::string(20, '\0')), EdgeFormat::binary), FormatError);
}

TEST_F(EdgeIo, MissingFileIsIoError) {
  EXPECT_THROW(load_edge_list(dir_ / "absent.txt", EdgeFormat::text), IoError);
}

TEST_F(EdgeIo, BinaryWithoutHeaderUsesMaxId) {
  const fs::path path = dir_ / "raw.bin";
  {
    std::ofstream out(path, std::ios::binary);
    const unsigned char bytes[16] = {4, 0, 0, 0, 0, 0, 0, 0, 9, 0, 0, 0, 0, 0, 0, 0};
    out.write(reinterpret_cast<const char*>(bytes), sizeof(bytes));
  }
  const EdgeList g = load_edge_list(path, EdgeFormat::binary);
  EXPECT_EQ(g.edges, (std::vector<Edge>{{4, 9}}));
  EXPECT_EQ(g.n, 10u);
}

TEST_F(EdgeIo, FormatFromExtension) {
  EXPECT_EQ(format_for_path("a.bin"), EdgeFormat::binary);
  EXPECT_EQ(format_for_path("a.del"), EdgeFormat::binary);
  EXPECT_EQ(format_for_path("a.txt"), EdgeFormat::text);
  EXPECT_EQ(format_for_path("a"), EdgeFormat::text);
}

TEST_F(EdgeIo, Scale10RoundTripBothFormats) {
  const EdgeList g = testing::rmat(10);
  for (EdgeFormat fmt : {EdgeFormat::text, EdgeFormat::binary}) {
    for (bool header : {true, false}) {
      const fs::path path = dir_ / (fmt == EdgeFormat::text ? "g.txt" : "g.bin");
      write_edge_list(g, path, fmt, header);
      const EdgeList back = load_edge_list(path, fmt);
      EXPECT_TRUE(oracle::same_multiset(back.edges, g.edges));
      if (header) EXPECT_EQ(back.n, g.n);
      EXPECT_LE(back.n, g.n);
    }
  }
}

TEST_F(EdgeIo, HeaderKeepsIsolatedTail) {
  EdgeList g;
  g.n = 100;
  g.edges = {{0, 1}};
  const fs::path path = dir_ / "iso.bin";
  write_edge_list(g, path, EdgeFormat::binary);
  EXPECT_EQ(load_edge_list(path, EdgeFormat::binary).n, 100u);
}

}  // namespace
}  // namespace dbfs
