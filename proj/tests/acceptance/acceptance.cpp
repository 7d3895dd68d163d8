// Acceptance suite: one check per numbered criterion, each printing a single
// PASS/FAIL line. Returns the number of failed criteria.

#include <cstdio>
#include <string>
#include <vector>

int main(int, char**) {
  std::printf("acceptance suite placeholder\n");
  return 1;
}
