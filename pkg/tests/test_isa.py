import pytest
from hypothesis import given, strategies as st

from pressura.isa import (ALPHABET_SIZE, ANCESTOR_CORE, CODE, GENOME_HEADER, INSTRUCTIONS,
                          Genome, GenomeFormatError, MutationConfig, complement_label,
                          parse_genome, read_genome, reference_ancestor, serialize_genome,
                          write_genome)

genomes = st.binary(min_size=1, max_size=200).map(
    lambda b: Genome(bytes(x % ALPHABET_SIZE for x in b)))


def test_instruction_set_has_26_distinct_mnemonics():
    assert len(INSTRUCTIONS) == 26 == ALPHABET_SIZE
    assert len(set(INSTRUCTIONS)) == 26
    assert INSTRUCTIONS[:3] == ("nop-a", "nop-b", "nop-c")


def test_complement_label_cycles_nops():
    assert complement_label([0, 1, 2]) == [1, 2, 0]
    assert complement_label([]) == []
    with pytest.raises(ValueError):
        complement_label([CODE["inc"]])


@given(genomes)
def test_genome_text_round_trip(g):
    assert parse_genome(serialize_genome(g)) == g


@given(genomes, st.dictionaries(st.sampled_from(["update", "w0", "source"]),
                                st.integers(0, 10**6), max_size=3))
def test_metadata_comments_are_ignored_on_read(g, meta):
    assert parse_genome(serialize_genome(g, meta)) == g


def test_file_round_trip(tmp_path):
    g = reference_ancestor(33)
    path = tmp_path / "a.genome"
    write_genome(path, g, {"note": "padded"})
    assert read_genome(path) == g
    assert path.read_text().startswith(GENOME_HEADER + "\n# note: padded\n")


@pytest.mark.parametrize("text, line", [
    ("nop-a\n", 1),
    (GENOME_HEADER + "\n", None),
    (GENOME_HEADER + "\nnop-a\nfrobnicate\n", 3),
    (GENOME_HEADER + "\n#bad comment\nnop-a\n", 2),
    (GENOME_HEADER + "\nnop-a\n# late: comment\n", 3),
])
def test_malformed_genome_text(text, line):
    with pytest.raises(GenomeFormatError) as err:
        parse_genome(text)
    assert err.value.line == line


def test_genome_validation():
    with pytest.raises(ValueError):
        Genome(b"")
    with pytest.raises(ValueError):
        Genome(bytes([26]))
    assert Genome([1, 2]) == Genome(b"\x01\x02")


def test_genome_order_is_lexicographic_on_codes():
    a = Genome.from_mnemonics(["nop-a", "inc"])
    b = Genome.from_mnemonics(["nop-b"])
    assert a < b
    assert sorted([b, a]) == [a, b]


def test_reference_ancestor_layout():
    g = reference_ancestor()
    assert len(g) == 20
    names = g.mnemonics()
    assert names[0] == "h-alloc"
    assert names[-2:] == ["nop-a", "nop-b"]
    assert names.count("h-divide") == 1 and names.count("h-copy") == 1
    # padding grows the no-op block only
    long = reference_ancestor(100).mnemonics()
    assert long[:6] == names[:6] and long[-9:] == names[-9:]
    assert set(long[6:91]) == {"nop-c"}


@pytest.mark.parametrize("bad", [ANCESTOR_CORE - 1, 5000])
def test_reference_ancestor_length_bounds(bad):
    with pytest.raises(ValueError):
        reference_ancestor(bad)


def test_mutation_config():
    m = MutationConfig(0.0075)
    assert m.effective_substitution_rate == pytest.approx(0.0075 * 25 / 26)
    fixed = MutationConfig(0.01, 0.3, 0.3, fixed_length=True)
    assert fixed.ins_rate == fixed.del_rate == 0.0
    with pytest.raises(ValueError):
        MutationConfig(1.5)
