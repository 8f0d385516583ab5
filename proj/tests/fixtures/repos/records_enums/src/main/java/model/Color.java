package model;

public enum Color {
    RED("r") {
        @Override
        public String describe() {
            return "warm";
        }
    },
    GREEN("g"),
    BLUE("b");

    private final String code;

    Color(String code) {
        this.code = code;
    }

    public Color next() {
        return values()[(ordinal() + 1) % values().length];
    }

    public String describe() {
        return code;
    }
}
