package sim;

public class Agent {
    private String name;

    public String getName() {
        return name;
    }
}
