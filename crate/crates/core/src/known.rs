//! Published parameter sets, and the designs this crate can build itself.

use crate::cyclotomic::{build_cyclotomic, derive_halfset_starter, field_table, search_starters, HalfsetDerivation};
use crate::ffield::is_prime;
use crate::design::{Design, ResolutionClasses};
use crate::multiplier::{build_multiplier, select_blocks, BlockSelection, MultiplierScheme};
use crate::search::{Budget, SearchOutcome};
use crate::{Error, Result};

/// Ordered-halfset data for `q = 97`: base block, the 15 listed halfset
/// elements and the 16 translates.
pub const HALFSET_97_BLOCK: [u32; 3] = [1, 13, 17];
pub const HALFSET_97_PARTIAL: [u32; 15] = [28, 8, 67, 33, 46, 70, 77, 22, 63, 18, 78, 50, 55, 12, 52];
pub const HALFSET_97_TRANSLATES: [u32; 16] = [41, 93, 79, 55, 48, 45, 74, 54, 34, 53, 20, 1, 25, 35, 70, 12];

/// Multiplier scheme on `Z_91` with `m = 9`.
pub fn multiplier_91() -> MultiplierScheme {
    MultiplierScheme {
        v: 91,
        m: 9,
        base_blocks: vec![[1, 42, 74], [5, 36, 39], [7, 33, 43], [48, 59, 73], [53, 75, 82]],
        translates: vec![79, 21, 11, 13, 2],
    }
}

/// The `Z_121`, `m = 3` data as listed: five blocks, four translates.
pub const MULTIPLIER_121_BLOCKS: [[u32; 3]; 5] =
    [[4, 10, 103], [14, 78, 118], [7, 33, 43], [22, 96, 104], [71, 85, 106]];
pub const MULTIPLIER_121_TRANSLATES: [u32; 4] = [49, 27, 28, 98];

/// Block-size-4 instance on `F_37` with `ω = 2`.
pub const K4_37_BASE: [u32; 4] = [1, 4, 6, 15];
pub const K4_37_TRANSLATES: (u32, u32) = (10, 18);

/// Completes the `q = 97` halfset; see [`derive_halfset_starter`].
pub fn halfset_97() -> Result<HalfsetDerivation> {
    derive_halfset_starter(97, HALFSET_97_BLOCK, &HALFSET_97_PARTIAL, &HALFSET_97_TRANSLATES)?
        .ok_or_else(|| Error::Precondition("no completion of the q = 97 halfset verifies".into()))
}

/// Resolves the over-listed `Z_121` blocks; see [`select_blocks`].
pub fn multiplier_121() -> Result<BlockSelection> {
    select_blocks(121, 3, &MULTIPLIER_121_BLOCKS, &MULTIPLIER_121_TRANSLATES, &mut Budget::new(100_000_000))?
        .found()
        .ok_or_else(|| Error::Precondition("no four-block selection of the Z_121 data verifies".into()))
}

/// Step budget of the starter search behind [`OwnConstruction::StarterSearch`].
/// Primes up to 700 other than 193, 577 and 673 succeed well within it.
const STARTER_BUDGET: u64 = 5_000_000;

/// How [`build_own`] obtains an NR*DSTS(v), if it can.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OwnConstruction {
    Cyclotomic,
    Halfset,
    Multiplier,
    /// A field construction whose starters come from [`search_starters`];
    /// may fail for some primes.
    StarterSearch,
}

pub fn own_construction(v: u32) -> Option<OwnConstruction> {
    if field_table().iter().any(|r| r.q == v) {
        Some(OwnConstruction::Cyclotomic)
    } else if v == 97 {
        Some(OwnConstruction::Halfset)
    } else if v == 91 || v == 121 {
        Some(OwnConstruction::Multiplier)
    } else if v >= 19 && v % 6 == 1 && is_prime(v as u64) {
        Some(OwnConstruction::StarterSearch)
    } else {
        None
    }
}

/// Builds and verifies an NR*DSTS(v) from this crate's own constructions,
/// or `None` when none applies.
pub fn build_own(v: u32) -> Option<Result<(Design, ResolutionClasses)>> {
    let how = own_construction(v)?;
    Some(match how {
        OwnConstruction::Cyclotomic => {
            let row = field_table().into_iter().find(|r| r.q == v).expect("listed");
            build_cyclotomic(v, Some(row.omega), &row.quads)
        }
        OwnConstruction::Halfset => {
            halfset_97().and_then(|d| crate::cyclotomic::build_halfset_starter(97, &d.starter))
        }
        OwnConstruction::Multiplier if v == 91 => build_multiplier(&multiplier_91()),
        OwnConstruction::Multiplier => multiplier_121().and_then(|s| build_multiplier(&s.scheme)),
        OwnConstruction::StarterSearch => match search_starters(v, &mut Budget::new(STARTER_BUDGET)) {
            Ok(SearchOutcome::Found(quads)) => build_cyclotomic(v, None, &quads),
            Ok(_) => Err(Error::MissingIngredient(format!("starter search found no NR*DSTS({v})"))),
            Err(e) => Err(e),
        },
    })
}
