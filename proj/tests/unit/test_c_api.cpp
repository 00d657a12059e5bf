#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "wgporo/wgporo.h"

namespace {

TEST(CApi, ConfigLifecycleAndErrors) {
  wgp_config* cfg = nullptr;
  EXPECT_EQ(wgp_config_create("stokes", &cfg), WGP_INVALID_ARGUMENT);
  EXPECT_EQ(cfg, nullptr);
  EXPECT_NE(std::string(wgp_last_error()).find("stokes"), std::string::npos);
  EXPECT_EQ(wgp_config_create(nullptr, &cfg), WGP_INVALID_ARGUMENT);

  ASSERT_EQ(wgp_config_create("poro2", &cfg), WGP_OK);
  EXPECT_EQ(wgp_config_set(cfg, "n", "4"), WGP_OK);
  EXPECT_EQ(wgp_config_set(cfg, "bogus", "1"), WGP_INVALID_ARGUMENT);
  EXPECT_EQ(wgp_config_set(cfg, "precond", "p2e"), WGP_OK);
  EXPECT_EQ(wgp_config_validate(cfg), WGP_INVALID_ARGUMENT);
  EXPECT_EQ(wgp_config_set(cfg, "precond", "p2dlu"), WGP_OK);
  EXPECT_EQ(wgp_config_validate(cfg), WGP_OK);
  EXPECT_EQ(wgp_config_load(cfg, "/nonexistent/config"), WGP_IO_ERROR);
  wgp_config_destroy(cfg);
  wgp_config_destroy(nullptr);
}

TEST(CApi, ProblemResetsDefaultPreconditioners) {
  wgp_config* cfg = nullptr;
  ASSERT_EQ(wgp_config_create("poro2", &cfg), WGP_OK);
  EXPECT_EQ(wgp_config_set(cfg, "problem", "elasticity"), WGP_OK);
  EXPECT_EQ(wgp_config_validate(cfg), WGP_OK);
  wgp_config_destroy(cfg);
}

TEST(CApi, RunAndReadRows) {
  wgp_config* cfg = nullptr;
  ASSERT_EQ(wgp_config_create("elasticity", &cfg), WGP_OK);
  ASSERT_EQ(wgp_config_set(cfg, "n", "4"), WGP_OK);
  ASSERT_EQ(wgp_config_set(cfg, "lambda", "1.4286"), WGP_OK);
  wgp_results* res = nullptr;
  ASSERT_EQ(wgp_run(cfg, &res), WGP_OK);
  size_t count = 0;
  ASSERT_EQ(wgp_results_count(res, &count), WGP_OK);
  ASSERT_EQ(count, 1u);
  wgp_row row;
  ASSERT_EQ(wgp_results_get(res, 0, &row), WGP_OK);
  EXPECT_EQ(row.dim, 2);
  EXPECT_EQ(row.n, 4);
  EXPECT_STREQ(row.precond, "p2e");
  EXPECT_EQ(row.converged, 1);
  EXPECT_GT(row.iterations, 0);
  EXPECT_EQ(wgp_results_get(res, 1, &row), WGP_INVALID_ARGUMENT);
  int all = 0;
  EXPECT_EQ(wgp_results_all_converged(res, &all), WGP_OK);
  EXPECT_EQ(all, 1);

  const auto path = (std::filesystem::temp_directory_path() / "wgporo_capi.csv").string();
  EXPECT_EQ(wgp_results_write(res, "csv", path.c_str()), WGP_OK);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "dim,n,lambda,mu,eps,c0,dt,kappa,precond,iters,converged,relres,wall_ms");
  std::filesystem::remove(path);
  EXPECT_EQ(wgp_results_write(res, "xml", path.c_str()), WGP_INVALID_ARGUMENT);
  EXPECT_EQ(wgp_results_write(res, "csv", "/nonexistent/dir/out.csv"), WGP_IO_ERROR);
  wgp_results_destroy(res);
  wgp_config_destroy(cfg);
}

TEST(CApi, ExportNeedsPathAndKnownTag) {
  wgp_config* cfg = nullptr;
  ASSERT_EQ(wgp_config_create("poro2", &cfg), WGP_OK);
  ASSERT_EQ(wgp_config_set(cfg, "n", "2"), WGP_OK);
  EXPECT_EQ(wgp_export(cfg, "Mp", nullptr), WGP_INVALID_ARGUMENT);
  const auto path = (std::filesystem::temp_directory_path() / "wgporo_capi.mtx").string();
  EXPECT_EQ(wgp_export(cfg, "Zz", path.c_str()), WGP_INVALID_ARGUMENT);
  EXPECT_EQ(wgp_export(cfg, "Ap", path.c_str()), WGP_OK);
  EXPECT_TRUE(std::filesystem::exists(path));
  std::filesystem::remove(path);
  wgp_config_destroy(cfg);
}

TEST(CApi, NullHandles) {
  EXPECT_EQ(wgp_run(nullptr, nullptr), WGP_INVALID_ARGUMENT);
  EXPECT_EQ(wgp_results_count(nullptr, nullptr), WGP_INVALID_ARGUMENT);
  int ok = 0;
  EXPECT_EQ(wgp_spectrum(nullptr, nullptr, &ok), WGP_INVALID_ARGUMENT);
  EXPECT_NE(std::string(wgp_version()), "");
}

}  // namespace
