// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include "r13/validate.hpp"

#include <iostream>

int main() {
    bool ok = true;
    for (int id = 1; id <= 9; ++id) {
        const r13::CriterionResult r = r13::criterion(id);
        std::cout << r13::formatResult(r) << std::endl;
        ok = ok && r.pass;
    }
    return ok ? 0 : 1;
}
