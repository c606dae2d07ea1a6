//! The macro-level genotype: a fixed-length list of genetic-operator
//! instructions over an array of population registers.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Opcode {
    Select,
    Crossover,
    Mutate,
}

impl Opcode {
    pub const ALL: [Opcode; 3] = [Opcode::Select, Opcode::Crossover, Opcode::Mutate];

    pub fn name(self) -> &'static str {
        match self {
            Opcode::Select => "Select",
            Opcode::Crossover => "Crossover",
            Opcode::Mutate => "Mutate",
        }
    }

    /// Whether executing this opcode creates (and evaluates) a new individual.
    pub fn creates_individual(self) -> bool {
        !matches!(self, Opcode::Select)
    }
}

/// `Pop[dest] = op(Pop[src1], Pop[src2])`. For `Mutate` the second source is
/// unused and kept equal to `src1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Instruction {
    pub op: Opcode,
    pub dest: usize,
    pub src1: usize,
    pub src2: usize,
}

impl Instruction {
    pub fn select(dest: usize, src1: usize, src2: usize) -> Self {
        Instruction { op: Opcode::Select, dest, src1, src2 }
    }

    pub fn crossover(dest: usize, src1: usize, src2: usize) -> Self {
        Instruction { op: Opcode::Crossover, dest, src1, src2 }
    }

    pub fn mutate(dest: usize, src: usize) -> Self {
        Instruction { op: Opcode::Mutate, dest, src1: src, src2: src }
    }

    pub fn max_register(&self) -> usize {
        self.dest.max(self.src1).max(self.src2)
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.op {
            Opcode::Mutate => write!(f, "Pop[{}] = Mutate(Pop[{}]);", self.dest, self.src1),
            op => write!(
                f,
                "Pop[{}] = {}(Pop[{}], Pop[{}]);",
                self.dest,
                op.name(),
                self.src1,
                self.src2
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EaProgram {
    pub instructions: Vec<Instruction>,
    pub num_registers: usize,
    pub micro_generations: usize,
}

impl EaProgram {
    /// Builds a program, checking every register index against `num_registers`.
    pub fn new(
        instructions: Vec<Instruction>,
        num_registers: usize,
        micro_generations: usize,
    ) -> Result<Self> {
        let program = EaProgram { instructions, num_registers, micro_generations };
        program.validate()?;
        Ok(program)
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_registers < 2 {
            return Err(Error::config(format!(
                "a program needs at least 2 registers, got {}",
                self.num_registers
            )));
        }
        for (pos, ins) in self.instructions.iter().enumerate() {
            if ins.max_register() >= self.num_registers {
                return Err(Error::config(format!(
                    "instruction {pos} (`{ins}`) addresses a register outside 0..{}",
                    self.num_registers
                )));
            }
        }
        Ok(())
    }
}

/// Uniform opcode and uniform register indices in `0..num_registers`.
pub fn random_instruction<R: Rng + ?Sized>(num_registers: usize, rng: &mut R) -> Result<Instruction> {
    if num_registers < 2 {
        return Err(Error::config(format!(
            "random instructions need at least 2 registers, got {num_registers}"
        )));
    }
    let op = Opcode::ALL[rng.random_range(0..3)];
    let dest = rng.random_range(0..num_registers);
    let src1 = rng.random_range(0..num_registers);
    let src2 = rng.random_range(0..num_registers);
    Ok(match op {
        Opcode::Mutate => Instruction::mutate(dest, src1),
        _ => Instruction { op, dest, src1, src2 },
    })
}

pub fn random_program<R: Rng + ?Sized>(
    code_length: usize,
    num_registers: usize,
    micro_generations: usize,
    rng: &mut R,
) -> Result<EaProgram> {
    if code_length == 0 {
        return Err(Error::config("code length must be at least 1"));
    }
    let instructions = (0..code_length)
        .map(|_| random_instruction(num_registers, rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(EaProgram { instructions, num_registers, micro_generations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn one_register_is_rejected() {
        let mut rng = rng_from_seed(1);
        assert!(matches!(
            random_instruction(1, &mut rng),
            Err(Error::InvalidConfiguration(_))
        ));
    }

    #[test]
    fn indices_stay_in_range() {
        let mut rng = rng_from_seed(2);
        for _ in 0..1000 {
            let ins = random_instruction(8, &mut rng).unwrap();
            assert!(ins.dest < 8 && ins.src1 < 8 && ins.src2 < 8);
            if ins.op == Opcode::Mutate {
                assert_eq!(ins.src1, ins.src2);
            }
        }
    }

    #[test]
    fn opcode_frequencies_are_uniform() {
        // Binomial(30000, 1/3): sd = sqrt(30000 * 1/3 * 2/3) = 81.65.
        let draws = 30_000;
        let sd = (draws as f64 * (1.0 / 3.0) * (2.0 / 3.0)).sqrt();
        let mut rng = rng_from_seed(3);
        let mut counts = [0usize; 3];
        for _ in 0..draws {
            let op = random_instruction(8, &mut rng).unwrap().op;
            counts[Opcode::ALL.iter().position(|&o| o == op).unwrap()] += 1;
        }
        for c in counts {
            assert!((c as f64 - draws as f64 / 3.0).abs() < 3.0 * sd, "{counts:?}");
        }
    }

    #[test]
    fn random_program_shapes() {
        let mut rng = rng_from_seed(4);
        assert!(random_program(0, 8, 10, &mut rng).is_err());
        let p = random_program(80, 40, 100, &mut rng).unwrap();
        assert_eq!(p.len(), 80);
        p.validate().unwrap();

        let a = random_program(20, 8, 5, &mut rng_from_seed(9)).unwrap();
        let b = random_program(20, 8, 5, &mut rng_from_seed(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn display_matches_listing_style() {
        assert_eq!(Instruction::mutate(0, 5).to_string(), "Pop[0] = Mutate(Pop[5]);");
        assert_eq!(
            Instruction::select(7, 3, 6).to_string(),
            "Pop[7] = Select(Pop[3], Pop[6]);"
        );
        assert_eq!(
            Instruction::crossover(2, 0, 2).to_string(),
            "Pop[2] = Crossover(Pop[0], Pop[2]);"
        );
    }

    #[test]
    fn validate_catches_out_of_range() {
        let err = EaProgram::new(vec![Instruction::select(0, 1, 9)], 8, 1).unwrap_err();
        assert!(err.to_string().contains("outside"));
    }
}
