#include "support.hpp"

#include <hessiso/io.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace hessiso;

TEST(Csv, MatrixRowsAndFullPrecision) {
  Mat g(2, 2);
  g << 1.0 / 3.0, 2, 2, 0.1;
  std::ostringstream os;
  write_csv(os, g);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "i,j,value");
  std::getline(in, line);
  EXPECT_EQ(line, "0,0,0.33333333333333331");
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(Csv, TensorHeaders) {
  std::ostringstream a, b;
  write_csv(a, Tensor3(2));
  write_csv(b, Tensor4(2));
  const std::string s3 = a.str(), s4 = b.str();
  EXPECT_EQ(s3.substr(0, s3.find('\n')), "i,j,k,value");
  EXPECT_EQ(s4.substr(0, s4.find('\n')), "i,j,k,l,value");
  EXPECT_EQ(std::count(s4.begin(), s4.end(), '\n'), 17);
}
