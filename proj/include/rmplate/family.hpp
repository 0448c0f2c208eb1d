#ifndef RMPLATE_FAMILY_HPP
#define RMPLATE_FAMILY_HPP

#include <stdexcept>
#include <string>

namespace rmplate {

enum class FamilyKind {
    LagrangeScalar,        // continuous P_p
    LagrangeVector,        // continuous [P_p]^2
    BubbleVector,          // continuous [P_p]^2 + interior degree-(p+1) bubbles
    RaviartThomas,         // rotated RT_p: P_{p-1}^2 + x^perp P_{p-1}, H(rot)
    BrezziDouglasMarini,   // rotated BDM_p: P_p^2, H(rot)
    DGScalar,              // discontinuous P_p
};

struct Family {
    FamilyKind kind;
    int degree;

    bool scalar_valued() const { return kind == FamilyKind::LagrangeScalar || kind == FamilyKind::DGScalar; }
    bool h1_conforming() const {
        return kind == FamilyKind::LagrangeScalar || kind == FamilyKind::LagrangeVector ||
               kind == FamilyKind::BubbleVector;
    }
    bool hrot_conforming() const {
        return kind == FamilyKind::RaviartThomas || kind == FamilyKind::BrezziDouglasMarini;
    }

    std::string name() const;

    static Family lagrange_scalar(int p) { return check({FamilyKind::LagrangeScalar, p}); }
    static Family lagrange_vector(int p) { return check({FamilyKind::LagrangeVector, p}); }
    static Family bubble_vector(int p) { return check({FamilyKind::BubbleVector, p}); }
    static Family raviart_thomas(int p) { return check({FamilyKind::RaviartThomas, p}); }
    static Family bdm(int p) { return check({FamilyKind::BrezziDouglasMarini, p}); }
    static Family dg_scalar(int p) { return check({FamilyKind::DGScalar, p}); }

private:
    static Family check(Family f) {
        if (f.kind == FamilyKind::DGScalar) {
            if (f.degree < 0) throw std::invalid_argument("DG degree must be >= 0");
        } else if (f.degree < 1) {
            throw std::invalid_argument(f.name() + ": degree must be >= 1");
        }
        if (f.degree > 8) throw std::invalid_argument(f.name() + ": degrees above 8 are not supported");
        return f;
    }
};

}  // namespace rmplate

#endif
