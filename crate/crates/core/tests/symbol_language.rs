use proptest::prelude::*;
use whap_core::symbol::Func;
use whap_core::{lower, parse, Complex64, ParseError, PointwiseSymbol, SymbolExpr};

const CORPUS: &str = include_str!("data/symbol_corpus.txt");

fn corpus() -> Vec<&'static str> {
    CORPUS
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

#[test]
fn corpus_round_trips() {
    let lines = corpus();
    assert!(lines.len() >= 30);
    for text in lines {
        let tree = parse(text).unwrap_or_else(|e| panic!("{text}: {e}"));
        let printed = tree.to_string();
        let back = parse(&printed).unwrap_or_else(|e| panic!("{printed}: {e}"));
        assert_eq!(back, tree, "{text} -> {printed}");
        assert_eq!(back.to_string(), printed);
    }
}

/// Where a corpus symbol is defined, its lowered form agrees with direct
/// evaluation of the tree.
#[test]
fn lowering_preserves_values() {
    let xs: Vec<f64> = (0..41).map(|k| -10.0 + 0.5 * k as f64 + 0.123).collect();
    for text in corpus() {
        let tree = parse(text).unwrap();
        let lowered = lower(&tree);
        for &x in &xs {
            let (Ok(direct), Ok(via)) = (tree.eval(x), lowered.value_at(x)) else {
                continue;
            };
            let scale = 1.0 + direct.norm();
            assert!(
                (direct - via).norm() <= 1e-10 * scale,
                "{text} at {x}: {direct} vs {via}"
            );
        }
    }
}

#[test]
fn malformed_inputs_have_positions() {
    let cases: [(&str, usize); 8] = [
        ("", 0),
        ("1 +", 3),
        ("(x", 2),
        ("2 ** x", 3),
        ("foo(x)", 0),
        ("e(x)", 2),
        ("sin x", 4),
        ("x $ 2", 2),
    ];
    for (text, offset) in cases {
        let err = parse(text).unwrap_err();
        assert_eq!(err.offset(), offset, "{text}: {err}");
    }
    assert!(matches!(parse("e(i)"), Err(ParseError::InvalidFrequency { .. })));
    assert!(matches!(parse("bar"), Err(ParseError::UnknownIdentifier { .. })));
}

fn leaf() -> impl Strategy<Value = SymbolExpr> {
    prop_oneof![
        (0.0..1e6f64).prop_map(|v| SymbolExpr::Const(Complex64::new(v, 0.0))),
        Just(SymbolExpr::Const(Complex64::i())),
        Just(SymbolExpr::Const(Complex64::new(std::f64::consts::PI, 0.0))),
        Just(SymbolExpr::Var),
        (-50.0..50.0f64).prop_map(SymbolExpr::Exponential),
    ]
}

fn tree() -> impl Strategy<Value = SymbolExpr> {
    leaf().prop_recursive(5, 48, 2, |inner| {
        let b = |e: SymbolExpr| Box::new(e);
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(move |(l, r)| SymbolExpr::Add(b(l), b(r))),
            (inner.clone(), inner.clone()).prop_map(move |(l, r)| SymbolExpr::Sub(b(l), b(r))),
            (inner.clone(), inner.clone()).prop_map(move |(l, r)| SymbolExpr::Mul(b(l), b(r))),
            (inner.clone(), inner.clone()).prop_map(move |(l, r)| SymbolExpr::Div(b(l), b(r))),
            (inner.clone(), inner.clone()).prop_map(move |(l, r)| SymbolExpr::Pow(b(l), b(r))),
            inner.clone().prop_map(move |e| SymbolExpr::Neg(b(e))),
            (0..Func::ALL.len(), inner).prop_map(move |(k, e)| SymbolExpr::Call(Func::ALL[k], b(e))),
        ]
    })
}

proptest! {
    #[test]
    fn format_then_parse_is_identity(t in tree()) {
        let text = t.to_string();
        prop_assert_eq!(parse(&text).unwrap(), t, "{}", text);
    }
}
