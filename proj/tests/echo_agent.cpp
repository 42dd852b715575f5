// Minimal external agent for protocol tests. Replies to every observation
// with a fixed token (argv[1]) or the first available action. With
// --quit-after N it exits after N replies; --prose answers in plain text.
#include <cstdlib>
#include <iostream>
#include <string>

#include "json.hpp"

int main(int argc, char** argv) {
  std::string fixed;
  long quit_after = -1;
  bool prose = false;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--quit-after" && i + 1 < argc) {
      quit_after = std::strtol(argv[++i], nullptr, 10);
    } else if (a == "--prose") {
      prose = true;
    } else {
      fixed = a;
    }
  }
  long replies = 0;
  std::string line;
  while (std::getline(std::cin, line)) {
    const auto msg = nlohmann::json::parse(line, nullptr, false);
    if (msg.is_discarded() || !msg.contains("type")) continue;
    const auto type = msg["type"].get<std::string>();
    if (type == "episode_end") return 0;
    if (type != "observation") continue;
    if (quit_after >= 0 && replies >= quit_after) return 0;
    if (prose) {
      std::cout << "I think I will go north now." << std::endl;
      ++replies;
      continue;
    }
    std::string token = fixed;
    if (token.empty()) token = msg["actions"].at(0).get<std::string>();
    std::cout << nlohmann::json{{"type", "action"}, {"action", token}}.dump() << std::endl;
    ++replies;
  }
  return 0;
}
