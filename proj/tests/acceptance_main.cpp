#include <iostream>

#include "epilab/selftest.hpp"

// Acceptance gate: exit status is the number of failed criteria.
int main() { return epilab::selftest::run_all(std::cout); }
