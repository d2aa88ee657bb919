//! Index of the statements the registry checks, as formulas.
//!
//! Every check refers to exactly one key here; the formula is what the check
//! evaluates, written in the crate's notation (`X` a quasi-normed function
//! space with constant `K`, `Φ` a Young function, `L = ‖f‖_{X^Φ}`,
//! `M = ‖Φ(|f|)‖_X`).

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Statement {
    pub key: &'static str,
    pub formula: &'static str,
}

pub const STATEMENTS: &[Statement] = &[
    Statement {
        key: "young-shape",
        formula: "Φ(0)=0, Φ increasing and convex, Φ⁻¹(Φ(t)) = t",
    },
    Statement {
        key: "young-quasi-subadditive",
        formula: "Φ(Σ tₙ) ≤ Σ (2α)^{-n} Φ((2α)^n tₙ)",
    },
    Statement {
        key: "young-delta2",
        formula: "Φ(2t) ≤ C Φ(t) for powers and t·log(1+t); fails for e^t − 1",
    },
    Statement {
        key: "qbfs-axioms",
        formula: "‖f‖=0 ⇔ f=0; ‖cf‖=|c|‖f‖; ‖f+g‖ ≤ K(‖f‖+‖g‖); |f|≤|g| ⇒ ‖f‖≤‖g‖; ‖χ_Ω‖<∞",
    },
    Statement {
        key: "qbfs-inclusion",
        formula: "‖f‖_X ≤ ‖f‖_∞ ‖χ_Ω‖_X",
    },
    Statement {
        key: "qbfs-fatou",
        formula: "0 ≤ fₙ ↑ f ⇒ ‖f‖_X = sup ‖fₙ‖_X",
    },
    Statement {
        key: "semivariation-duality",
        formula: "‖m‖(A) = sup_{‖y*‖≤1} |⟨m,y*⟩|(A) = max_{s∈{±1}^A} ‖Σ sᵢ mᵢ‖",
    },
    Statement {
        key: "semivariation-subadditive",
        formula: "A ⊆ B ⇒ ‖m‖(A) ≤ ‖m‖(B); ‖m‖(A∪B) ≤ ‖m‖(A) + ‖m‖(B)",
    },
    Statement {
        key: "rybakov",
        formula: "μ = |⟨m,y*⟩| with μ(A)=0 ⇔ ‖m‖(A)=0",
    },
    Statement {
        key: "layer-cake",
        formula: "‖f‖_{L¹(‖m‖)} = ∫₀^∞ ‖m‖([|f|>t]) dt = Σ|fᵢ|μᵢ for m=μ scalar",
    },
    Statement {
        key: "lp-oracle",
        formula: "‖f‖_{L¹(μ)^{t^p}} = (Σ |fᵢ|^p μᵢ)^{1/p}",
    },
    Statement {
        key: "char-norm",
        formula: "‖χ_A‖_{X^Φ} = 1 / Φ⁻¹(1/‖χ_A‖_X)",
    },
    Statement {
        key: "base-embedding",
        formula: "‖f‖_X ≤ K ‖χ_Ω‖_X max_a Φ⁻¹(1/‖χ_a‖_X) ‖f‖_{X^Φ}",
    },
    Statement {
        key: "linf-embedding",
        formula: "‖f‖_{X^Φ} ≤ ‖f‖_∞ / Φ⁻¹(1/‖χ_Ω‖_X)",
    },
    Statement {
        key: "norm-below-modular",
        formula: "L ≤ max{1, M}",
    },
    Statement {
        key: "modular-bounded-family",
        formula: "sup_h ‖Φ(|h|)‖_X ≤ B ⇒ sup_h ‖h‖_{X^Φ} ≤ max{1, B}",
    },
    Statement {
        key: "modular-inside-ball",
        formula: "L < 1 ⇒ M ≤ L",
    },
    Statement {
        key: "modular-outside-ball",
        formula: "L > 1 ⇒ M ≥ L",
    },
    Statement {
        key: "scaled-young-certificate",
        formula: "sup_h ‖h‖_{X^Φ} < R ⇒ sup_h ‖Φ(|h|/R)‖_X ≤ 1",
    },
    Statement {
        key: "luxemburg-quasi-norm",
        formula: "‖f+g‖_{X^Φ} ≤ K(‖f‖_{X^Φ}+‖g‖_{X^Φ}) with K of X; ‖cf‖=|c|‖f‖; lattice",
    },
    Statement {
        key: "attained-infimum",
        formula: "X σ-Fatou, f≠0 ⇒ ‖Φ(|f|/L)‖_X ≤ 1",
    },
    Statement {
        key: "modular-closed-ball",
        formula: "X σ-Fatou, L ≤ 1 ⇒ M ≤ L",
    },
    Statement {
        key: "fatou-transfer",
        formula: "X σ-Fatou, 0 ≤ fₙ ↑ f ⇒ ‖f‖_{X^Φ} = sup ‖fₙ‖_{X^Φ}",
    },
    Statement {
        key: "delta2-null-sequences",
        formula: "Φ ∈ Δ2 ⇒ (‖fₙ‖_{X^Φ} → 0 ⇔ ‖Φ(|fₙ|)‖_X → 0)",
    },
    Statement {
        key: "delta2-order-continuity",
        formula: "Φ ∈ Δ2, X σ-o.c., 0 ≤ fₙ ↑ f ⇒ ‖f − fₙ‖_{X^Φ} → 0",
    },
    Statement {
        key: "l-convexity-transfer",
        formula: "X L-convex at ε, Φ(2t) ≤ sΦ(t) ⇒ X^Φ L-convex at δ with (1−δ)^s = 1−ε",
    },
    Statement {
        key: "weak-orlicz-identity",
        formula: "sup_{‖y*‖≤1} ‖f‖_{L^Φ(|⟨m,y*⟩|)} = ‖f‖_{L¹_w(m)^Φ}",
    },
    Statement {
        key: "semivariation-orlicz-battery",
        formula: "in L^Φ(‖m‖): L ≤ max{1,M}; L ≤ 1 ⇒ M ≤ L; L > 1 ⇒ M ≥ L; bounded sets transfer both ways",
    },
    Statement {
        key: "semivariation-orlicz-delta2",
        formula: "Φ ∈ Δ2 ⇒ (‖fₙ‖_{L^Φ(‖m‖)} → 0 ⇔ ‖Φ(|fₙ|)‖_{L¹(‖m‖)} → 0)",
    },
    Statement {
        key: "calderon-orlicz",
        formula: "(X^{Φ₀})^{1−θ}(X^{Φ₁})^θ = X^Φ, Φ⁻¹ = (Φ₀⁻¹)^{1−θ}(Φ₁⁻¹)^θ",
    },
    Statement {
        key: "calderon-collapse",
        formula: "X^{1−θ}X^θ = X",
    },
    Statement {
        key: "interpolation-exponent",
        formula: "[L^{p₀}(‖m‖), L^{p₁}(‖m‖)]_θ = L^p(‖m‖), 1/p = (1−θ)/p₀ + θ/p₁",
    },
    Statement {
        key: "powers-commute",
        formula: "(X₀^{1−θ}X₁^θ)_[r] = (X₀_[r])^{1−θ}(X₁_[r])^θ",
    },
    Statement {
        key: "s-convexity",
        formula: "‖(Σ|f_k|^s)^{1/s}‖_X ≤ C (Σ‖f_k‖_X^s)^{1/s}",
    },
    Statement {
        key: "semivariation-lp-l-convex",
        formula: "L^s(‖m‖) = L¹(‖m‖)_[1/s] is L-convex",
    },
];

pub fn lookup(key: &str) -> Option<&'static Statement> {
    STATEMENTS.iter().find(|s| s.key == key)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn keys_are_unique_and_formulas_present() {
        let mut seen = HashSet::new();
        for s in STATEMENTS {
            assert!(seen.insert(s.key), "duplicate key {}", s.key);
            assert!(!s.formula.is_empty());
        }
        assert!(lookup("char-norm").is_some());
        assert!(lookup("nope").is_none());
    }
}
