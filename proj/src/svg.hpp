#pragma once

#include <string>
#include <vector>

#include "rewards.hpp"
#include "run_io.hpp"

namespace gardo {

// Renders the three run figures as hand-rolled SVG (no external renderer):
//   reward_curve.svg   mean proxy / true reward vs iteration
//   kl_dynamics.svg    k, gated fraction and KL loss vs iteration
//   samples_panel.svg  final samples over reward-landscape shading
// Output bytes are deterministic for fixed inputs. Returns the file paths.
// landscape may be null (flat shading). Throws RuntimeError on empty
// metrics.
std::vector<std::string> render_plots(const std::vector<MetricsRecord>& metrics,
                                      const std::vector<Vec2>& samples,
                                      const RewardSpec* landscape, const std::string& out_dir);

std::vector<std::string> render_plots(const std::string& metrics_path,
                                      const std::string& samples_path,
                                      const RewardSpec* landscape, const std::string& out_dir);

}  // namespace gardo
