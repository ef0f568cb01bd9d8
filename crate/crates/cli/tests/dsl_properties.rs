use cfdtm_cli::dsl::{parse_ast, parse_equation, parse_expr, DslEquation, DslExpr, LhsTerm, OrderSpec, Pos};
use proptest::prelude::*;

mod common;
use common::{MALFORMED, ROUND_TRIP_CORPUS};

#[test]
fn corpus_round_trips() {
    for src in ROUND_TRIP_CORPUS {
        let ast = parse_ast(src).unwrap_or_else(|e| panic!("{src}: {e:?}"));
        let printed = ast.to_string();
        let again = parse_ast(&printed).unwrap_or_else(|e| panic!("{printed}: {e:?}"));
        assert_eq!(ast, again, "{src} -> {printed}");
    }
}

#[test]
fn corpus_covers_every_node_type() {
    fn visit(e: &DslExpr, seen: &mut [bool; 12]) {
        let i = match e {
            DslExpr::Num(_) => 0,
            DslExpr::Y => 1,
            DslExpr::D(..) => 2,
            DslExpr::YPow(..) => 3,
            DslExpr::TPow(..) => 4,
            DslExpr::Exp(_) => 5,
            DslExpr::Sin(..) => 6,
            DslExpr::Cos(..) => 7,
            DslExpr::Add(..) => 8,
            DslExpr::Sub(..) => 9,
            DslExpr::Mul(..) => 10,
            DslExpr::Neg(_) => 11,
        };
        seen[i] = true;
        match e {
            DslExpr::Add(l, r) | DslExpr::Sub(l, r) | DslExpr::Mul(l, r) => {
                visit(l, seen);
                visit(r, seen);
            }
            DslExpr::Neg(x) => visit(x, seen),
            _ => {}
        }
    }
    let mut seen = [false; 12];
    let mut lhs_kinds = [false; 4];
    for src in ROUND_TRIP_CORPUS {
        let ast = parse_ast(src).unwrap();
        visit(&ast.rhs, &mut seen);
        for t in &ast.lhs {
            lhs_kinds[0] |= t.coeff.is_some();
            lhs_kinds[1] |= t.order.is_none();
            lhs_kinds[2] |= t.negated;
            lhs_kinds[3] |= t.order == Some(OrderSpec::Alpha);
        }
    }
    assert!(seen.iter().all(|&s| s), "{seen:?}");
    assert!(lhs_kinds.iter().all(|&s| s), "{lhs_kinds:?}");
}

#[test]
fn malformed_inputs_give_diagnostics() {
    for src in MALFORMED {
        let errs = parse_ast(src).expect_err(src);
        assert!(!errs.is_empty());
        assert!(errs[0].line >= 1 && errs[0].col >= 1, "{src}: {errs:?}");
    }
}

fn number() -> impl Strategy<Value = f64> {
    prop_oneof![(0u32..1000).prop_map(f64::from), 0.0..1e6f64, 1e-12..1e-3f64]
}

fn signed() -> impl Strategy<Value = f64> {
    prop_oneof![number(), number().prop_map(|x| -x)]
}

fn order() -> impl Strategy<Value = OrderSpec> {
    prop_oneof![Just(OrderSpec::Alpha), number().prop_map(OrderSpec::Value)]
}

fn expr() -> impl Strategy<Value = DslExpr> {
    let p = Pos::default();
    let leaf = prop_oneof![
        number().prop_map(DslExpr::Num),
        Just(DslExpr::Y),
        order().prop_map(move |o| DslExpr::D(o, p)),
        (1u32..10).prop_map(move |n| DslExpr::YPow(n, p)),
        number().prop_map(move |x| DslExpr::TPow(x, p)),
        signed().prop_map(DslExpr::Exp),
        (signed(), proptest::option::of(signed())).prop_map(|(w, c)| DslExpr::Sin(w, c)),
        (signed(), proptest::option::of(signed())).prop_map(|(w, c)| DslExpr::Cos(w, c)),
    ];
    leaf.prop_recursive(5, 40, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| DslExpr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| DslExpr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| DslExpr::Mul(Box::new(a), Box::new(b))),
            inner.prop_map(|a| DslExpr::Neg(Box::new(a))),
        ]
    })
}

fn lhs_term(first: bool) -> impl Strategy<Value = LhsTerm> {
    (any::<bool>(), proptest::option::of(number()), proptest::option::of(order())).prop_map(
        move |(neg, coeff, order)| LhsTerm {
            negated: neg && !first,
            coeff,
            order,
            pos: Pos::default(),
        },
    )
}

fn equation() -> impl Strategy<Value = DslEquation> {
    (lhs_term(true), proptest::collection::vec(lhs_term(false), 0..3), expr()).prop_map(|(t, rest, rhs)| {
        let mut lhs = vec![t];
        lhs.extend(rest);
        DslEquation { lhs, rhs }
    })
}

proptest! {
    #[test]
    fn printed_trees_reparse_identically(eq in equation()) {
        let printed = eq.to_string();
        let back = parse_ast(&printed);
        prop_assert_eq!(back, Ok(eq), "{}", printed);
    }

    #[test]
    fn parser_is_total_on_arbitrary_text(src in ".{0,80}") {
        let _ = parse_ast(&src);
        let _ = parse_expr(&src);
        let _ = parse_equation(&src, 0.5);
    }

    #[test]
    fn parser_is_total_on_token_soup(
        toks in proptest::collection::vec(
            prop_oneof![
                Just("D["), Just("]"), Just("y"), Just("t"), Just("^"), Just("a"), Just("/"),
                Just("("), Just(")"), Just("+"), Just("-"), Just("*"), Just("="), Just("exp("),
                Just("sin("), Just("cos("), Just("1"), Just("0.5"), Just("2"), Just(" "),
            ],
            0..40,
        ),
        alpha in 0.01f64..1.0,
    ) {
        let src: String = toks.concat();
        if let Err(errs) = parse_equation(&src, alpha) {
            prop_assert!(!errs.is_empty());
        }
    }
}
