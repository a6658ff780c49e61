//! Shared fixtures for the benchmark suite.

use kpf_core::{Morphism, Word};

/// The 5-uniform morphism over {a,b,c,d} whose image of `abcd` embeds a cube.
pub fn embedded_cube_morphism() -> Morphism {
    Morphism::parse_text("a -> baaba\nb -> bcdab\nc -> cdabc\nd -> dbaab\n").unwrap()
}

/// The 4-uniform 12-letter morphism whose covered cube reduces in one step.
pub fn reducible_cube_morphism() -> Morphism {
    Morphism::parse_text(
        "1 -> 1234\n2 -> 2345\n3 -> 3451\n4 -> 4521\n5 -> 5123\n6 -> 5212\n\
         7 -> 5178\n8 -> 6234\n9 -> 1781\na -> 2346\nb -> 7812\nc -> 3462\n",
    )
    .unwrap()
}

/// Thue–Morse: 2-uniform, 3-power-free. Iterating from `a` gives
/// arbitrarily long cube-free words.
pub fn thue_morse() -> Morphism {
    Morphism::parse_text("a -> ab\nb -> ba\n").unwrap()
}

/// The cube-free Thue–Morse prefix of length `2^rounds`.
pub fn thue_morse_word(rounds: u32) -> Word {
    let mu = thue_morse();
    let mut w = mu.domain().word_from_str("a").unwrap();
    for _ in 0..rounds {
        w = mu.apply(&w).unwrap();
    }
    w
}
