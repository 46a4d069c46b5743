#pragma once
#include <string>
#include <vector>
int cli_main(const std::vector<std::string>& args);
