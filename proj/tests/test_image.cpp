#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "imgrank/image.hpp"
#include "test_util.hpp"

using imgrank::Image;
using imgrank::Rgb;

TEST_CASE("bmp round trip preserves pixels") {
  testutil::TempDir tmp("bmp");
  std::mt19937_64 rng(7);
  for (const auto& [w, h] : {std::pair{5, 3}, std::pair{4, 4}, std::pair{17, 9}}) {
    const Image img = testutil::random_image(w, h, rng);
    const std::string path = tmp.file("t.bmp");
    imgrank::write_bmp(path, img);
    const Image back = imgrank::read_bmp(path);
    REQUIRE(back.width == img.width);
    REQUIRE(back.height == img.height);
    CHECK(back.pixels == img.pixels);
  }
}

TEST_CASE("bmp writes are byte deterministic") {
  testutil::TempDir tmp("bmpdet");
  std::mt19937_64 rng(11);
  const Image img = testutil::random_image(13, 7, rng);
  imgrank::write_bmp(tmp.file("a.bmp"), img);
  imgrank::write_bmp(tmp.file("b.bmp"), img);
  CHECK(testutil::read_file_bytes(tmp.file("a.bmp")) ==
        testutil::read_file_bytes(tmp.file("b.bmp")));
}

TEST_CASE("png decode matches encoded pixels") {
  testutil::TempDir tmp("png");
  std::mt19937_64 rng(3);
  const Image img = testutil::random_image(9, 6, rng);
  testutil::write_png_test(tmp.file("t.png"), img);
  const Image back = imgrank::read_png(tmp.file("t.png"));
  REQUIRE(back.width == 9);
  REQUIRE(back.height == 6);
  CHECK(back.pixels == img.pixels);
}

TEST_CASE("jpeg decode approximates encoded pixels") {
  testutil::TempDir tmp("jpeg");
  const Image img = testutil::solid_image(16, 16, Rgb{200, 60, 60});
  testutil::write_jpeg_test(tmp.file("t.jpg"), img);
  const Image back = imgrank::read_jpeg(tmp.file("t.jpg"));
  REQUIRE(back.width == 16);
  REQUIRE(back.height == 16);
  // lossy codec: allow a small channel error
  for (const Rgb& p : back.pixels) {
    CHECK(std::abs(int(p.r) - 200) <= 8);
    CHECK(std::abs(int(p.g) - 60) <= 8);
    CHECK(std::abs(int(p.b) - 60) <= 8);
  }
}

TEST_CASE("corrupted files are rejected with the path in the message") {
  testutil::TempDir tmp("bad");
  std::ofstream(tmp.file("junk.png")) << "this is not an image";
  CHECK_THROWS_WITH(imgrank::read_image(tmp.file("junk.png")),
                    Catch::Matchers::ContainsSubstring("junk.png"));
  std::ofstream(tmp.file("junk.bmp")) << "BMnope";
  CHECK_THROWS(imgrank::read_bmp(tmp.file("junk.bmp")));
  CHECK_THROWS(imgrank::read_image(tmp.file("missing.jpg")));
  CHECK_THROWS_WITH(imgrank::read_image(tmp.file("notes.txt")),
                    Catch::Matchers::ContainsSubstring("unrecognized"));
}

TEST_CASE("decoders reject random garbage without crashing") {
  testutil::TempDir tmp("fuzz");
  std::mt19937_64 rng(12345);
  for (int round = 0; round < 40; ++round) {
    const std::size_t size = rng() % 200;
    std::string bytes(size, '\0');
    for (auto& c : bytes) c = static_cast<char>(rng() % 256);
    if (round % 4 == 0 && size >= 2) {
      bytes[0] = 'B';  // plausible BMP magic, garbage body
      bytes[1] = 'M';
    }
    const std::string ext = (round % 3 == 0) ? ".bmp" : (round % 3 == 1) ? ".png" : ".jpg";
    const std::string path = tmp.file("fuzz" + std::to_string(round) + ext);
    std::ofstream(path, std::ios::binary).write(bytes.data(), static_cast<std::streamsize>(size));
    CHECK_THROWS(imgrank::read_image(path));
  }
}

TEST_CASE("truncated bmp pixel data is rejected") {
  testutil::TempDir tmp("trunc");
  std::mt19937_64 rng(5);
  const Image img = testutil::random_image(10, 10, rng);
  imgrank::write_bmp(tmp.file("full.bmp"), img);
  const std::string bytes = testutil::read_file_bytes(tmp.file("full.bmp"));
  std::ofstream(tmp.file("cut.bmp"), std::ios::binary)
      .write(bytes.data(), static_cast<std::streamsize>(bytes.size() / 2));
  CHECK_THROWS_WITH(imgrank::read_bmp(tmp.file("cut.bmp")),
                    Catch::Matchers::ContainsSubstring("truncated"));
}

TEST_CASE("resample of a 128x128 input is the identity") {
  std::mt19937_64 rng(23);
  const Image img = testutil::random_image(128, 128, rng);
  const Image out = imgrank::resample_working(img);
  CHECK(out.pixels == img.pixels);
}

TEST_CASE("resample rejects tiny images and handles other sizes") {
  CHECK_THROWS(imgrank::resample_working(Image(2, 128)));
  CHECK_THROWS(imgrank::resample_working(Image(128, 2)));
  const Image small = testutil::solid_image(3, 5, Rgb{9, 9, 9});
  const Image out = imgrank::resample_working(small);
  REQUIRE(out.width == 128);
  REQUIRE(out.height == 128);
  for (const Rgb& p : out.pixels) CHECK(p == Rgb{9, 9, 9});
}

TEST_CASE("luma formula") {
  CHECK(imgrank::luma(Rgb{255, 255, 255}) == 255);
  CHECK(imgrank::luma(Rgb{0, 0, 0}) == 0);
  // 0.299 * 255 = 76.245 -> 76
  CHECK(imgrank::luma(Rgb{255, 0, 0}) == 76);
  CHECK(imgrank::luma(Rgb{0, 255, 0}) == 150);  // 149.685 -> 150
  CHECK(imgrank::luma(Rgb{0, 0, 255}) == 29);   // 29.07 -> 29
}

TEST_CASE("preprocess of an all-white image gives all-255 luma") {
  const Image img = testutil::solid_image(40, 40, Rgb{255, 255, 255});
  const imgrank::Preprocessed pre = imgrank::preprocess(img);
  REQUIRE(pre.gray.width == 128);
  REQUIRE(pre.gray.height == 128);
  for (const std::uint8_t v : pre.gray.pixels) CHECK(v == 255);
}
