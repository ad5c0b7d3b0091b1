use ftl_core::{format, parse, Bound, Formula};
use proptest::prelude::*;

fn atom() -> impl Strategy<Value = Formula> {
    prop_oneof![
        8 => prop::sample::select(vec!["p", "q", "r", "d", "c", "x_1", "Xa", "Fq", "Until", "true_", "Ox"])
            .prop_map(Formula::atom),
        1 => Just(Formula::Top),
        1 => Just(Formula::Bot),
    ]
}

fn bound() -> impl Strategy<Value = Bound> {
    prop_oneof![0..5u32, Just(1_000_000u32)]
}

fn formula() -> impl Strategy<Value = Formula> {
    atom().prop_recursive(8, 96, 2, |inner| {
        let un = inner.clone();
        let bin = (inner.clone(), inner.clone());
        prop_oneof![
            un.clone().prop_map(Formula::not),
            un.clone().prop_map(Formula::next),
            un.clone().prop_map(Formula::soon),
            un.clone().prop_map(Formula::eventually),
            un.clone().prop_map(Formula::always),
            un.clone().prop_map(Formula::almost_always),
            (bound(), un.clone()).prop_map(|(t, f)| Formula::eventually_b(t, f)),
            (bound(), un.clone()).prop_map(|(t, f)| Formula::always_b(t, f)),
            (bound(), un.clone()).prop_map(|(t, f)| Formula::almost_always_b(t, f)),
            (bound(), un.clone()).prop_map(|(t, f)| Formula::lasts(t, f)),
            (bound(), un.clone()).prop_map(|(t, f)| Formula::within(t, f)),
            (1..4u32, un).prop_map(|(j, f)| Formula::scale(j, f)),
            bin.clone().prop_map(|(a, b)| Formula::and(a, b)),
            bin.clone().prop_map(|(a, b)| Formula::or(a, b)),
            bin.clone().prop_map(|(a, b)| Formula::implies(a, b)),
            bin.clone().prop_map(|(a, b)| Formula::weak_and(a, b)),
            bin.clone().prop_map(|(a, b)| Formula::weak_or(a, b)),
            bin.clone().prop_map(|(a, b)| Formula::until(a, b)),
            bin.clone().prop_map(|(a, b)| Formula::almost_until(a, b)),
            (bound(), bin.clone()).prop_map(|(t, (a, b))| Formula::until_b(t, a, b)),
            (bound(), bin).prop_map(|(t, (a, b))| Formula::almost_until_b(t, a, b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn format_then_parse_is_identity(f in formula()) {
        prop_assert!(f.depth() <= 9);
        let text = format(&f);
        let back = parse(&text);
        prop_assert_eq!(back.as_ref(), Ok(&f), "text: {}", text);
    }

    #[test]
    fn formatting_is_a_fixed_point(f in formula()) {
        let once = format(&f);
        let twice = format(&parse(&once).unwrap());
        prop_assert_eq!(once, twice);
    }
}

fn alphabet() -> impl Strategy<Value = String> {
    prop::collection::vec(
        prop::sample::select(vec![
            "p", "q", " ", "!", "&", "&&", "|", "||", "->", "-", ">", "(", ")", "[", "]", "X", "S",
            "F", "G", "AG", "AU", "U", "L", "W", "O", "3", "0", "99999999", "true", "false", "é", "\t",
        ]),
        0..24,
    )
    .prop_map(|parts| parts.concat())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn rejections_point_inside_the_input(text in alphabet()) {
        if let Err(e) = parse(&text) {
            prop_assert!(e.span.start <= e.span.end, "{e}");
            prop_assert!(e.span.end <= text.len(), "{e} for {text:?}");
            prop_assert!(text.is_char_boundary(e.span.start) && text.is_char_boundary(e.span.end));
            prop_assert!(!e.message.is_empty());
        }
    }

    #[test]
    fn truncated_formulas_fail_inside_the_input(f in formula(), cut in any::<prop::sample::Index>()) {
        let text = format(&f);
        let cut = cut.index(text.len() + 1);
        if !text.is_char_boundary(cut) {
            return Ok(());
        }
        if let Err(e) = parse(&text[..cut]) {
            prop_assert!(e.span.end <= cut);
        }
    }
}

#[test]
fn grammar_examples() {
    let p = |s: &str| parse(s).unwrap();
    let a = Formula::atom;
    assert_eq!(p("d -> W[1] c"), Formula::implies(a("d"), Formula::within(1, a("c"))));
    assert_eq!(p("p U q & r"), Formula::and(Formula::until(a("p"), a("q")), a("r")));
    assert_eq!(p("p -> q -> r"), Formula::implies(a("p"), Formula::implies(a("q"), a("r"))));
    assert_eq!(p("X[3] p"), Formula::next_n(3, a("p")));
    assert_eq!(p("p && q || r"), Formula::weak_or(Formula::weak_and(a("p"), a("q")), a("r")));
    assert_eq!(p("p AU[2] q U r"), Formula::until(Formula::almost_until_b(2, a("p"), a("q")), a("r")));
    assert!(parse("F[1000001] p").is_err());
    assert!(parse("").is_err());
    assert!(parse("p q").is_err());
}
